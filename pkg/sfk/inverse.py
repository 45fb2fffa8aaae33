# BSD 3-Clause License

# Copyright (c) 2019, sfk authors
# All rights reserved.

# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:

# * Redistributions of source code must retain the above copyright notice, this
#   list of conditions and the following disclaimer.

# * Redistributions in binary form must reproduce the above copyright notice,
#   this list of conditions and the following disclaimer in the documentation
#   and/or other materials provided with the distribution.

# * Neither the name of the copyright holder nor the names of its
#   contributors may be used to endorse or promote products derived from
#   this software without specific prior written permission.

# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE ARE
# DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE
# FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR CONSEQUENTIAL
# DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF SUBSTITUTE GOODS OR
# SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS INTERRUPTION) HOWEVER
# CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY,
# OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

"""Reverse construction: isothermal coordinates from a symplectic potential.

Given a potential u on P, r = (det Hess u)^(-1/2) and H is the primitive of

    dH = -u^{2j} r_j / r dx_1 + u^{1j} r_j / r dx_2,

which is closed exactly when u is scalar-flat (its curl is minus the scalar
curvature). Potentials are supplied by samplers.
"""
from __future__ import division

import numpy as np
from scipy.interpolate import RectBivariateSpline
from sklearn.utils import Bunch

from sfk.correspondence import (
    abreu_scalar_curvature,
    hessian_u,
    moment_map_inverse,
    moment_map_jacobian,
    potential,
)
from sfk.exceptions import (
    BoundaryEvaluation,
    NewtonDivergence,
    NumericalFailure,
    SFKValueError,
    SingularHessian,
)
from sfk.numerics import fd_partial, integrate_1form, newton2, square_loop
from sfk.polytope import J, distance_to_boundary, guillemin_facet_values, interior_point, is_interior


class PotentialSampler(object):
    """Base class of symplectic potentials on a polytope.

    Subclasses implement ``evaluate(x)`` returning a Bunch with u, gradient
    and hessian. Third derivatives default to differences of the Hessian.

    Parameters
    ----------
    polytope : DelzantPolytope, optional
        Domain of the potential.
    """

    def __init__(self, polytope=None):
        self.polytope = polytope

    def evaluate(self, x):
        raise NotImplementedError

    def potential(self, x):
        return self.evaluate(x).u

    def gradient(self, x):
        return self.evaluate(x).gradient

    def hessian(self, x):
        return self.evaluate(x).hessian

    def inverse_hessian(self, x):
        M = self.hessian(x)
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        if not (det > 0 and M[0, 0] > 0):
            raise SingularHessian("SingularHessian: Hess u not positive definite at %s (det %.3g)" % (x, det))
        return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]]) / det

    def contains(self, x):
        return self.polytope is None or is_interior(self.polytope, x)

    def distance(self, x):
        """Distance from x to the boundary of the sampled region."""
        if self.polytope is None:
            raise SFKValueError("%s has no domain to measure distances in" % type(self).__name__)
        return distance_to_boundary(self.polytope, x)

    @property
    def base_point(self):
        """Default start of the H integration."""
        return interior_point(self.polytope)

    def third_derivatives(self, x, step=0.05):
        """T[i, j, k] = d u_ij / dx_k, by extrapolated central differences."""
        x = np.asarray(x, dtype=float)
        h = step * self.distance(x)
        T = np.empty((2, 2, 2))
        for k in range(2):
            T[:, :, k] = fd_partial(self.hessian, x, (k,), h=h, domain=self.contains).value
        return T

    def r_and_gradient(self, x):
        """r = (det Hess u)^(-1/2) and its gradient in x."""
        M = self.hessian(x)
        det = np.linalg.det(M)
        if not det > 0:
            raise SingularHessian("SingularHessian: det Hess u = %.3g at %s" % (det, x))
        r = det ** -0.5
        T = self.third_derivatives(x)
        U = np.linalg.inv(M)
        return r, -0.5 * r * np.einsum("ij,jik->k", U, T)

    def h_form(self, x):
        """Covector of dH at x."""
        r, grad_r = self.r_and_gradient(x)
        return J.dot(self.inverse_hessian(x).dot(grad_r)) / r

    def scalar_curvature(self, x, step=0.1):
        """Scalar curvature by Abreu's formula with differenced inverse Hessians."""
        return abreu_scalar_curvature(self.inverse_hessian, x, step * self.distance(x), domain=self.contains)


class GuilleminSampler(PotentialSampler):
    """The canonical potential u_P = 1/2 sum_i (l_i log l_i - l_i)."""

    def __init__(self, polytope):
        super(GuilleminSampler, self).__init__(polytope)

    def _facet_values(self, x):
        l = guillemin_facet_values(self.polytope, x)
        if np.any(l <= 0):
            raise BoundaryEvaluation(
                "BoundaryEvaluation: Guillemin potential needs an interior point, l(%s) = %s" % (x, l)
            )
        return l

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        l = self._facet_values(x)
        N = self.polytope.normals.astype(float)
        return Bunch(
            u=0.5 * np.sum(l * np.log(l) - l),
            gradient=0.5 * N.T.dot(np.log(l)),
            hessian=0.5 * np.einsum("i,ij,ik->jk", 1.0 / l, N, N),
        )

    def third_derivatives(self, x, step=None):
        l = self._facet_values(x)
        N = self.polytope.normals.astype(float)
        return -0.5 * np.einsum("i,ij,ik,il->jkl", 1.0 / l ** 2, N, N, N)


def guillemin_potential(P, x):
    """Value, gradient and Hessian of the Guillemin potential at x."""
    res = GuilleminSampler(P).evaluate(x)
    return res.u, res.gradient, res.hessian


class PairSampler(PotentialSampler):
    """Potential of the metric built from a harmonic pair, evaluated exactly.

    Points are pulled back to the half-plane by Newton inversion of the
    closed-form moment map; u is the path-integrated potential and the
    Hessian the factorised form D xi D xi^T / V.

    Parameters
    ----------
    pair : AxiHarmonicPair
    polytope : DelzantPolytope, optional
    tol : float, optional
        Newton tolerance of the inversion (default Tolerances.newton_abs).
    quad_tol : float, optional
        Quadrature tolerance of the potential (default Tolerances.quad_abs).
    """

    def __init__(self, pair, polytope=None, tol=None, quad_tol=None):
        super(PairSampler, self).__init__(polytope)
        self.pair = pair
        self.tol = tol
        self.quad_tol = quad_tol

    def locate(self, x):
        return moment_map_inverse(self.pair, x, tol=self.tol)

    def evaluate(self, x):
        p = self.locate(x)
        return Bunch(u=potential(self.pair, p, tol=self.quad_tol), gradient=self.pair.jet(p, order=0)[0], hessian=hessian_u(self.pair, p))

    def hessian(self, x):
        return hessian_u(self.pair, self.locate(x))

    def third_derivatives(self, x, step=None):
        p = self.locate(x)
        _, X, D2 = self.pair.jet(p, order=2)
        det = np.linalg.det(X)
        V = -p[1] * det
        M = X.dot(X.T) / V
        Y = np.linalg.inv(X)
        B = np.linalg.inv(moment_map_jacobian(self.pair, p))
        dM = np.empty((2, 2, 2))
        for b in range(2):
            dX = D2[:, :, b]
            dV = -p[1] * det * np.trace(Y.dot(dX)) - (det if b == 1 else 0.0)
            dM[:, :, b] = (dX.dot(X.T) + X.dot(dX.T)) / V - M * dV / V
        return np.einsum("ijb,bk->ijk", dM, B)

    def r_and_gradient(self, x):
        p = self.locate(x)
        B = np.linalg.inv(moment_map_jacobian(self.pair, p))
        return p[1], B[1]

    def distance(self, x):
        if self.polytope is not None:
            return distance_to_boundary(self.polytope, x)
        from sfk.correspondence import stencil_scale

        return stencil_scale(self.pair, self.locate(x))

    @property
    def base_point(self):
        from sfk.correspondence import moment_map_exact

        return moment_map_exact(self.pair, 0.0, 1.0)


def _spline_degree(n_nodes, degree):
    return min(degree, n_nodes - 1)


class ChartSampler(PotentialSampler):
    """Potential interpolated from a metric chart.

    x, u and the Hessian entries are splines on the (H, r) lattice; a point
    of P is located by Newton iterations on the interpolated moment map.
    """

    def __init__(self, chart, polytope=None, degree=5):
        super(ChartSampler, self).__init__(polytope)
        self.chart = chart
        kx = _spline_degree(chart.H.size, degree)
        ky = _spline_degree(chart.r.size, degree)
        shape = chart.shape

        def spline(values):
            return RectBivariateSpline(chart.H, chart.r, np.reshape(values, shape).T, kx=kx, ky=ky)

        self._x = [spline(chart.x[:, 0]), spline(chart.x[:, 1])]
        self._u = spline(chart.u)
        self._h = [spline(chart.hess[:, 0, 0]), spline(chart.hess[:, 0, 1]), spline(chart.hess[:, 1, 1])]

    def _in_lattice(self, p):
        return self.chart.H[0] <= p[0] <= self.chart.H[-1] and self.chart.r[0] <= p[1] <= self.chart.r[-1]

    def _mu(self, p):
        return np.array([s.ev(p[0], p[1]) for s in self._x])

    def _jacobian(self, p):
        return np.array([[s.ev(p[0], p[1], dx=1), s.ev(p[0], p[1], dy=1)] for s in self._x])

    def locate(self, x):
        x = np.asarray(x, dtype=float)
        i = np.argmin(np.linalg.norm(self.chart.x - x, axis=1))
        try:
            return newton2(self._mu, self._jacobian, x, self.chart.points[i], domain=self._in_lattice, polish=0).x
        except NewtonDivergence as e:
            raise BoundaryEvaluation("BoundaryEvaluation: %s is outside the chart (%s)" % (x, e))

    def _hess_at(self, p, dx=0, dy=0):
        h11, h12, h22 = [s.ev(p[0], p[1], dx=dx, dy=dy) for s in self._h]
        return np.array([[h11, h12], [h12, h22]])

    def evaluate(self, x):
        p = self.locate(x)
        B = np.linalg.inv(self._jacobian(p))
        du = np.array([self._u.ev(p[0], p[1], dx=1), self._u.ev(p[0], p[1], dy=1)])
        return Bunch(u=float(self._u.ev(p[0], p[1])), gradient=du.dot(B), hessian=self._hess_at(p))

    def hessian(self, x):
        return self._hess_at(self.locate(x))

    def third_derivatives(self, x, step=None):
        p = self.locate(x)
        B = np.linalg.inv(self._jacobian(p))
        dM = np.stack([self._hess_at(p, dx=1), self._hess_at(p, dy=1)], axis=-1)
        return np.einsum("ijb,bk->ijk", dM, B)

    def contains(self, x):
        try:
            self.locate(x)
        except BoundaryEvaluation:
            return False
        return super(ChartSampler, self).contains(x)

    def distance(self, x):
        p = self.locate(x)
        H, r = self.chart.H, self.chart.r
        d_p = min(p[0] - H[0], H[-1] - p[0], p[1] - r[0], r[-1] - p[1])
        smallest = np.linalg.svd(self._jacobian(p), compute_uv=False)[-1]
        d = d_p * smallest
        if self.polytope is not None:
            d = min(d, distance_to_boundary(self.polytope, x))
        return d

    @property
    def base_point(self):
        return self.chart.x[self.chart.n_nodes // 2]


class GridSampler(PotentialSampler):
    """Potential interpolated from values on a rectangular x-lattice.

    Parameters
    ----------
    x1, x2 : ndarray
        Increasing lattice coordinates.
    values : ndarray, shape (len(x2), len(x1))
        u at the nodes, x2 being the slow index.
    polytope : DelzantPolytope, optional
    degree : int, default 5
        Spline degree (Hessians and third derivatives come from the spline).
    """

    def __init__(self, x1, x2, values, polytope=None, degree=5):
        super(GridSampler, self).__init__(polytope)
        self.x1 = np.asarray(x1, dtype=float)
        self.x2 = np.asarray(x2, dtype=float)
        values = np.asarray(values, dtype=float)
        if values.shape != (self.x2.size, self.x1.size):
            raise SFKValueError("Grid values of shape %s for a %dx%d lattice" % (values.shape, self.x2.size, self.x1.size))
        self.values = values
        self._spline = RectBivariateSpline(
            self.x1,
            self.x2,
            values.T,
            kx=_spline_degree(self.x1.size, degree),
            ky=_spline_degree(self.x2.size, degree),
        )

    def _d(self, x, dx, dy):
        return float(self._spline.ev(x[0], x[1], dx=dx, dy=dy))

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise BoundaryEvaluation("BoundaryEvaluation: %s outside the potential grid" % (x,))
        h12 = self._d(x, 1, 1)
        return Bunch(
            u=self._d(x, 0, 0),
            gradient=np.array([self._d(x, 1, 0), self._d(x, 0, 1)]),
            hessian=np.array([[self._d(x, 2, 0), h12], [h12, self._d(x, 0, 2)]]),
        )

    def third_derivatives(self, x, step=None):
        x = np.asarray(x, dtype=float)
        d30, d21, d12, d03 = [self._d(x, 3 - k, k) for k in range(4)]
        T = np.empty((2, 2, 2))
        T[0, 0, 0] = d30
        T[0, 0, 1] = T[0, 1, 0] = T[1, 0, 0] = d21
        T[0, 1, 1] = T[1, 0, 1] = T[1, 1, 0] = d12
        T[1, 1, 1] = d03
        return T

    def contains(self, x):
        inside = self.x1[0] < x[0] < self.x1[-1] and self.x2[0] < x[1] < self.x2[-1]
        return inside and super(GridSampler, self).contains(x)

    def distance(self, x):
        d = min(x[0] - self.x1[0], self.x1[-1] - x[0], x[1] - self.x2[0], self.x2[-1] - x[1])
        if self.polytope is not None:
            d = min(d, distance_to_boundary(self.polytope, x))
        return d

    @property
    def base_point(self):
        return np.array([self.x1[self.x1.size // 2], self.x2[self.x2.size // 2]])

    def nodes(self):
        """Lattice nodes, x2 slow and x1 fast."""
        X1, X2 = np.meshgrid(self.x1, self.x2)
        return np.column_stack((X1.ravel(), X2.ravel()))


def isothermal_coordinates(sampler, x, base_x=None, base_H=0.0, tol=None):
    """Recover (H, r) at x from a potential.

    Parameters
    ----------
    sampler : PotentialSampler
    x : array-like, shape (2,)
    base_x : array-like, shape (2,), optional
        Start of the straight integration path (default sampler.base_point),
        where H takes the value base_H.
    tol : float, optional
        Quadrature tolerance.

    Returns
    -------
    Bunch with H, r and closedness_residual, the integral of dH around the
    square of half-side dist(x, boundary) / 4 centred at x.
    """
    x = np.asarray(x, dtype=float)
    base_x = sampler.base_point if base_x is None else np.asarray(base_x, dtype=float)
    r, _ = sampler.r_and_gradient(x)
    if np.allclose(base_x, x, rtol=0, atol=1e-15):
        H = base_H
    else:
        H = base_H + integrate_1form(sampler.h_form, np.array([base_x, x]), tol=tol, half_plane=False)[0]
    loop = square_loop(x, 0.25 * sampler.distance(x))
    residual, _ = integrate_1form(sampler.h_form, loop, tol=tol, half_plane=False)
    return Bunch(H=H, r=r, closedness_residual=residual)


def conformal_factor_check(sampler, x, base_x=None, step=0.05, tol=None):
    """Residual of Hess u = V D Phi^T D Phi, Phi = (H, r) as functions of x.

    dH is obtained by differencing the path-integrated H, so the residual
    also measures the failure of dH to be closed.
    """
    x = np.asarray(x, dtype=float)
    base_x = sampler.base_point if base_x is None else np.asarray(base_x, dtype=float)
    h = step * sampler.distance(x)

    def H(y):
        return integrate_1form(sampler.h_form, np.array([base_x, y]), tol=tol, half_plane=False)[0]

    dH = np.array([fd_partial(H, x, (k,), h=h, domain=sampler.contains).value for k in range(2)])
    _, dr = sampler.r_and_gradient(x)
    DPhi = np.vstack((dH, dr))
    M = sampler.hessian(x)
    V = np.sqrt(np.linalg.det(M)) / abs(np.linalg.det(DPhi))
    return np.linalg.norm(M - V * DPhi.T.dot(DPhi))


def sampler_scalar_curvature(sampler, x, step=0.1):
    return sampler.scalar_curvature(x, step=step)


def u_minus_uP(sampler, x):
    """u - u_P, bounded near every facet for admissible potentials."""
    return sampler.potential(x) - GuilleminSampler(sampler.polytope).potential(x)


def u_minus_model(sampler, model, x):
    """Difference between a potential and a model potential at x."""
    return sampler.potential(x) - model.potential(x)


def read_potential_grid(filename, polytope=None, degree=5):
    """Read a potential-grid CSV (header x1,x2,u; x2 slow, x1 fast)."""
    import pandas as pd

    try:
        df = pd.read_csv(filename)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise SFKValueError("Malformed potential grid %s: %s" % (filename, e))
    if list(df.columns) != ["x1", "x2", "u"]:
        raise SFKValueError("Potential grid header must be x1,x2,u, got %s" % ",".join(df.columns))
    values = df.values.astype(float)
    x1 = np.unique(values[:, 0])
    x2 = np.unique(values[:, 1])
    if x1.size * x2.size != values.shape[0] or x1.size < 2 or x2.size < 2:
        raise SFKValueError("Potential grid %s is not a rectangular lattice" % filename)
    X1, X2 = np.meshgrid(x1, x2)
    if not (np.array_equal(values[:, 0], X1.ravel()) and np.array_equal(values[:, 1], X2.ravel())):
        raise SFKValueError("Potential grid rows must be ordered by x2, then x1")
    return GridSampler(x1, x2, values[:, 2].reshape(x2.size, x1.size), polytope=polytope, degree=degree)


def write_potential_grid(sampler, x1, x2, filename):
    """Sample a potential on a lattice and write it as CSV."""
    import pandas as pd

    X1, X2 = np.meshgrid(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))
    nodes = np.column_stack((X1.ravel(), X2.ravel()))
    u = [sampler.potential(x) for x in nodes]
    df = pd.DataFrame(np.column_stack((nodes, u)), columns=["x1", "x2", "u"])
    df.to_csv(filename, index=False, float_format="%.17g")
    return filename


def invert_grid(sampler, base_x=None, base_H=0.0, tol=1e-8, verbose=False):
    """Isothermal coordinates at the interior nodes of a GridSampler.

    Parameters
    ----------
    sampler : GridSampler
    base_x, base_H : see isothermal_coordinates
    tol : float, default 1e-8
        Quadrature tolerance; spline potentials are not accurate beyond it.

    Returns
    -------
    frame : pandas.DataFrame with columns x1, x2, H, r, closedness_residual
    """
    import pandas as pd

    X1, X2 = np.meshgrid(sampler.x1[1:-1], sampler.x2[1:-1])
    rows = []
    for x in np.column_stack((X1.ravel(), X2.ravel())):
        try:
            res = isothermal_coordinates(sampler, x, base_x=base_x, base_H=base_H, tol=tol)
        except NumericalFailure as e:
            raise NumericalFailure("Inversion failed at x = %s: %s" % (x, e))
        rows.append((x[0], x[1], res.H, res.r, res.closedness_residual))
        if verbose:
            print("x = %s: H = %.6g, r = %.6g, residual %.3g" % (x, res.H, res.r, res.closedness_residual))
    return pd.DataFrame(rows, columns=["x1", "x2", "H", "r", "closedness_residual"])
