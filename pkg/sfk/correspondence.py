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

"""Forward construction of the metric from a harmonic pair.

Orientation convention: the moment coordinates are primitives of

    dx_1 = r (xi_2,H dr - xi_2,r dH),    dx_2 = r (xi_1,r dH - xi_1,H dr),

so that V = -r det(D xi) is positive on every valid chart, the symplectic
potential has Hessian D xi D xi^T / V and the flat model of the quadrant is
x_1 = (rho - H) / 2, x_2 = (rho + H) / 2. Integration constants put the
limit of the moment map at (h_1, 0) on the first vertex of the polytope.
"""
from __future__ import division

import warnings

import joblib as jl
import numpy as np
from six.moves import range
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils import Bunch

from sfk.exceptions import (
    DegenerateJacobian,
    InadmissibleParameter,
    NewtonDivergence,
    NumericalFailure,
    SFKValueError,
    StencilLeavesDomain,
)
from sfk.numerics import BASE_POINT, canonical_path, integrate_1form, newton2, richardson
from sfk.polytope import J, guillemin_facet_values
from sfk.utils import is_pos_def

CHART_COLUMNS = ["H", "r", "x1", "x2", "u", "h11", "h12", "h22", "V", "s_resid"]

# A[j, a] = r * sum_{k, c} _E[j, a, k, c] * D xi[k, c], with A the Jacobian of the moment map
_E = np.zeros((2, 2, 2, 2))
_E[0, 0, 1, 1] = -1
_E[0, 1, 1, 0] = 1
_E[1, 0, 0, 1] = 1
_E[1, 1, 0, 0] = -1


def _half_plane(p):
    return p[1] > 0


def d_xi(pair, p):
    """Jacobian of xi at p and the volume factor V = -r det(D xi).

    Returns
    -------
    Bunch with jacobian (rows d xi_k / dH, d xi_k / dr), det, V and
    orientation_flipped (True when V <= 0, i.e. the chart is not a metric
    under the orientation convention).
    """
    X = pair.jet(p, order=1)[1]
    det = np.linalg.det(X)
    if abs(det) < 1e-14:
        raise DegenerateJacobian(p, det)
    V = -p[1] * det
    return Bunch(jacobian=X, det=det, V=V, orientation_flipped=bool(V <= 0))


def moment_map_jacobian(pair, p):
    """Jacobian of the moment map, rows x_1, x_2 and columns H, r."""
    X = pair.jet(p, order=1)[1]
    return p[1] * np.einsum("jakc,kc->ja", _E, X)


def _stream(pair, H, r):
    """Stream functions of the basis terms combined with the pair coefficients."""
    if pair.polynomial:
        raise SFKValueError("Closed-form moment map is only available for log/jump/linear pairs")
    H = np.asarray(H, dtype=float)
    r = np.asarray(r, dtype=float)
    inner = H[..., None] * pair.log_r_coeff - 0.5 * (r * r)[..., None] * pair.linear_coeff
    for h, c in zip(pair.anchors, pair.jump_coeffs):
        Hs = H - h
        inner = inner + (Hs - np.hypot(Hs, r))[..., None] * c
    return inner.dot(J.T)


def vertex_constant(pair):
    """Integration constant placing the limit of mu at (h_1, 0) on pair.vertex."""
    h1 = pair.anchors[0] if pair.anchors.size else 0.0
    return pair.vertex - _stream(pair, h1, 0.0)


def moment_map_exact(pair, H, r):
    """Closed-form moment map; H and r broadcast, result has shape (..., 2)."""
    return _stream(pair, H, r) + vertex_constant(pair)


def moment_map(pair, p, base=None, tol=None, return_error=False):
    """Moment coordinates of p by path integration of (dx_1, dx_2).

    Parameters
    ----------
    pair : AxiHarmonicPair
    p : array-like, shape (2,)
        Half-plane point (H, r).
    base : array-like, shape (2,), optional
        Start of the canonical path, default (0, 1). The value at the base
        is fixed by vertex anchoring.
    tol : float, optional
        Quadrature tolerance per segment.

    Returns
    -------
    x : ndarray, shape (2,)
    """
    base = BASE_POINT if base is None else np.asarray(base, dtype=float)
    start = moment_map_exact(pair, base[0], base[1])
    delta, error = integrate_1form(lambda q: moment_map_jacobian(pair, q), canonical_path(base, p), tol=tol)
    if return_error:
        return start + delta, error
    return start + delta


def potential(pair, p, base=None, tol=None):
    """Symplectic potential u(p) = integral of xi . dx from the base point.

    The affine gauge is u(base) = 0 (the gradient at the base is xi(base)).
    """
    base = BASE_POINT if base is None else np.asarray(base, dtype=float)

    def form(q):
        jet = pair.jet(q, order=1)
        return jet[0].dot(q[1] * np.einsum("jakc,kc->ja", _E, jet[1]))

    value, _ = integrate_1form(form, canonical_path(base, p), tol=tol)
    return value


def hessian_u(pair, p):
    """Hessian of the symplectic potential, D xi D xi^T / V."""
    res = d_xi(pair, p)
    X = res.jacobian
    return X.dot(X.T) / res.V


def inverse_hessian_u(pair, p):
    """Inverse Hessian u^{jk} = V (D xi D xi^T)^{-1}."""
    res = d_xi(pair, p)
    X = res.jacobian
    return res.V * np.linalg.inv(X.dot(X.T))


def _default_guess(pair, x):
    """Best node of a coarse lattice, scaled to the size of x."""
    scale = max(1.0, np.linalg.norm(np.asarray(x) - pair.vertex))
    lo = (pair.anchors[0] if pair.anchors.size else 0.0) - 3 * scale
    hi = (pair.anchors[-1] if pair.anchors.size else 0.0) + 3 * scale
    HH, rr = np.meshgrid(np.linspace(lo, hi, 61), np.geomspace(1e-3, 4 * scale, 61))
    dist = np.linalg.norm(moment_map_exact(pair, HH, rr) - x, axis=-1)
    i = np.unravel_index(np.argmin(dist), dist.shape)
    return np.array([HH[i], rr[i]])


def moment_map_inverse(pair, x, guess=None, tol=None, n_continuation=8):
    """Half-plane point p with mu(p) = x, by damped Newton.

    On divergence from the guess, the target is approached along the
    straight segment from mu(guess) in n_continuation steps.
    """
    x = np.asarray(x, dtype=float)
    guess = _default_guess(pair, x) if guess is None else np.asarray(guess, dtype=float)

    def mu(q):
        return moment_map_exact(pair, q[0], q[1])

    def jac(q):
        return moment_map_jacobian(pair, q)

    try:
        return newton2(mu, jac, x, guess, tol=tol, domain=_half_plane).x
    except NewtonDivergence:
        pass
    start = mu(guess)
    current = guess
    for t in np.linspace(0, 1, n_continuation + 1)[1:]:
        current = newton2(mu, jac, (1 - t) * start + t * x, current, tol=tol, domain=_half_plane).x
    return current


def abreu_scalar_curvature(inverse_hessian, x, h, domain=None):
    """Abreu's formula s = -1/2 sum_jk d^2 u^{jk} / dx_j dx_k by differences.

    Parameters
    ----------
    inverse_hessian : callable
        Maps a point of the polytope to the 2x2 matrix u^{jk}.
    x : array-like, shape (2,)
    h : float
        Initial stencil half-width; Ridders' tableau refines it.
    domain : callable, optional
        domain(y) is False outside the polytope; the 9-point stencil of
        half-width h must stay inside.
    """
    x = np.asarray(x, dtype=float)
    e1, e2 = np.eye(2)
    if domain is not None:
        for s1 in (-1, 0, 1):
            for s2 in (-1, 0, 1):
                if not domain(x + h * (s1 * e1 + s2 * e2)):
                    raise StencilLeavesDomain("StencilLeavesDomain: stencil of half-width %g at %s" % (h, x))
    U0 = inverse_hessian(x)

    def estimate(hh):
        d11 = (inverse_hessian(x + hh * e1)[0, 0] - 2 * U0[0, 0] + inverse_hessian(x - hh * e1)[0, 0]) / hh ** 2
        d22 = (inverse_hessian(x + hh * e2)[1, 1] - 2 * U0[1, 1] + inverse_hessian(x - hh * e2)[1, 1]) / hh ** 2
        d12 = (
            inverse_hessian(x + hh * (e1 + e2))[0, 1]
            - inverse_hessian(x + hh * (e1 - e2))[0, 1]
            - inverse_hessian(x - hh * (e1 - e2))[0, 1]
            + inverse_hessian(x - hh * (e1 + e2))[0, 1]
        ) / (4 * hh ** 2)
        return -0.5 * (d11 + 2 * d12 + d22)

    value, _ = richardson(estimate, h)
    return value


def stencil_scale(pair, p):
    """Half of r |d mu / dr|, comparable to the distance of mu(p) from the boundary."""
    A = moment_map_jacobian(pair, p)
    return 0.5 * p[1] * np.linalg.norm(A[:, 1])


def scalar_curvature(pair, p, step=0.1):
    """Scalar curvature at mu(p) from differenced inverse Hessians.

    The inverse Hessian is evaluated in closed form at the preimages of the
    stencil points (Newton from the linearised guess); the stencil
    half-width is step times the local scale of the chart.
    """
    p = np.asarray(p, dtype=float)
    x0 = moment_map_exact(pair, p[0], p[1])
    B = np.linalg.inv(moment_map_jacobian(pair, p))

    def inv_hess(x):
        guess = p + B.dot(x - x0)
        if guess[1] <= 0:
            guess = np.array([guess[0], 0.5 * p[1]])
        try:
            q = newton2(
                lambda q: moment_map_exact(pair, q[0], q[1]),
                lambda q: moment_map_jacobian(pair, q),
                x,
                guess,
                tol=1e-12 * max(1.0, np.linalg.norm(x)),
                domain=_half_plane,
            ).x
        except NewtonDivergence as e:
            raise StencilLeavesDomain("StencilLeavesDomain: no preimage of %s (%s)" % (x, e))
        return inverse_hessian_u(pair, q)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        return abreu_scalar_curvature(inv_hess, x0, step * stencil_scale(pair, p))


def scalar_curvature_exact(pair, p):
    """Scalar curvature at mu(p) by the chain rule with third derivatives of xi."""
    H, r = p
    _, X, D2, D3 = pair.jet(p, order=3)
    G = np.einsum("jakc,kc->ja", _E, X)
    G2 = np.einsum("jakc,kcb->jab", _E, D2)
    G3 = np.einsum("jakc,kcbe->jabe", _E, D3)
    A = r * G
    dA = r * G2
    dA[:, :, 1] += G
    ddA = r * G3
    ddA[:, :, 1, :] += G2
    ddA[:, :, :, 1] += G2

    Y = np.linalg.inv(X)
    B = np.linalg.inv(A)
    dY = np.empty((2, 2, 2))
    dB = np.empty((2, 2, 2))
    for b in range(2):
        dY[:, :, b] = -Y.dot(D2[:, :, b]).dot(Y)
        dB[:, :, b] = -B.dot(dA[:, :, b]).dot(B)
    dM = np.empty((2, 2, 2))
    ddM = np.empty((2, 2, 2, 2))
    for b in range(2):
        dM[:, :, b] = dA[:, :, b].dot(Y) + A.dot(dY[:, :, b])
        for e in range(2):
            ddY = (
                -dY[:, :, e].dot(D2[:, :, b]).dot(Y)
                - Y.dot(D3[:, :, b, e]).dot(Y)
                - Y.dot(D2[:, :, b]).dot(dY[:, :, e])
            )
            ddM[:, :, b, e] = (
                ddA[:, :, b, e].dot(Y) + dA[:, :, b].dot(dY[:, :, e]) + dA[:, :, e].dot(dY[:, :, b]) + A.dot(ddY)
            )
    # d/dx_j of w_j = sum_k d/dx_k u^{jk}, all pulled back through B = (D mu)^{-1}
    dw = np.einsum("jkbe,bk->je", ddM, B) + np.einsum("jkb,bke->je", dM, dB)
    return -0.5 * np.einsum("je,ej->", dw, B)


def check_admissible(pair, P=None, n_probe=25, verbose=False):
    """Operational admissibility: V > 0 and mu inside P on a probe lattice.

    Returns
    -------
    Bunch with admissible, witness (first failing (H, r) or None), V_min and
    the cone determinants det(nu_1, nu), det(nu_d, nu) when P is given.
    """
    lo = (pair.anchors[0] if pair.anchors.size else 0.0) - 5.0
    hi = (pair.anchors[-1] if pair.anchors.size else 0.0) + 5.0
    witness, V_min = None, np.inf
    for r in np.geomspace(1e-2, 1e2, n_probe):
        for H in np.linspace(lo, hi, n_probe):
            p = np.array([H, r])
            try:
                V = d_xi(pair, p).V
            except DegenerateJacobian:
                V = 0.0
            inside = True
            if P is not None and V > 0:
                inside = bool(np.all(guillemin_facet_values(P, moment_map_exact(pair, H, r)) > 0))
            V_min = min(V_min, V)
            if (V <= 0 or not inside) and witness is None:
                witness = Bunch(point=p, V=V, inside=inside)
    result = Bunch(admissible=witness is None, witness=witness, V_min=V_min)
    if P is not None:
        nu = pair.linear_coeff
        result.cone = (
            float(P.normals[0, 0] * nu[1] - P.normals[0, 1] * nu[0]),
            float(P.normals[-1, 0] * nu[1] - P.normals[-1, 1] * nu[0]),
        )
    if verbose:
        print("admissible: %s, min V on probe: %.3g" % (result.admissible, V_min))
    return result


class MetricChart(object):
    """Metric data sampled on a rectangular (H, r) lattice.

    Nodes are ordered with r as the slow index and H as the fast one.

    Attributes
    ----------
    pair : AxiHarmonicPair or None (charts read from CSV)
    H, r : ndarray
        Lattice coordinates.
    points : ndarray, shape (n_nodes, 2)
    x : ndarray, shape (n_nodes, 2)
        Moment coordinates.
    u, V, s_resid : ndarray, shape (n_nodes,)
    hess : ndarray, shape (n_nodes, 2, 2)
    errors : list of (node index, message)
    """

    def __init__(self, H, r, x, u, hess, V, s_resid, pair=None, errors=None):
        self.H = np.asarray(H, dtype=float)
        self.r = np.asarray(r, dtype=float)
        HH, rr = np.meshgrid(self.H, self.r)
        self.points = np.column_stack((HH.ravel(), rr.ravel()))
        self.x = np.asarray(x, dtype=float).reshape(-1, 2)
        self.u = np.asarray(u, dtype=float).reshape(-1)
        self.hess = np.asarray(hess, dtype=float).reshape(-1, 2, 2)
        self.V = np.asarray(V, dtype=float).reshape(-1)
        self.s_resid = np.asarray(s_resid, dtype=float).reshape(-1)
        self.pair = pair
        self.errors = list(errors or [])
        if not self.x.shape[0] == self.points.shape[0]:
            raise SFKValueError("Chart with %d nodes for a %dx%d lattice" % (self.x.shape[0], self.H.size, self.r.size))

    @property
    def n_nodes(self):
        return self.points.shape[0]

    @property
    def shape(self):
        return self.r.size, self.H.size

    def interior_mask(self):
        """Nodes not on the outer ring of the lattice."""
        mask = np.zeros(self.shape, dtype=bool)
        mask[1:-1, 1:-1] = True
        return mask.ravel()

    def to_frame(self):
        import pandas as pd

        data = np.column_stack(
            (
                self.points,
                self.x,
                self.u,
                self.hess[:, 0, 0],
                self.hess[:, 0, 1],
                self.hess[:, 1, 1],
                self.V,
                self.s_resid,
            )
        )
        return pd.DataFrame(data, columns=CHART_COLUMNS)

    def write_csv(self, filename):
        """Write the chart with 17 significant digits."""
        self.to_frame().to_csv(filename, index=False, float_format="%.17g", na_rep="nan")
        return filename

    def check(self, P=None):
        """Invariant violations per node: V > 0, Hess u positive definite, mu inside P."""
        violations = []
        for i in range(self.n_nodes):
            if not self.V[i] > 0:
                violations.append((i, "V <= 0"))
            if not is_pos_def(self.hess[i]):
                violations.append((i, "Hess u not positive definite"))
            if P is not None and not np.all(guillemin_facet_values(P, self.x[i]) > 0):
                violations.append((i, "mu outside P"))
        return violations


def read_chart(filename):
    """Read a chart CSV (header exactly as written by MetricChart.write_csv)."""
    import pandas as pd

    try:
        df = pd.read_csv(filename)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise SFKValueError("Malformed chart CSV %s: %s" % (filename, e))
    if list(df.columns) != CHART_COLUMNS:
        raise SFKValueError("Chart CSV header must be %s, got %s" % (",".join(CHART_COLUMNS), ",".join(df.columns)))
    if df.shape[0] == 0:
        raise SFKValueError("Chart CSV %s has no rows" % filename)
    values = df.values.astype(float)
    H = np.unique(values[:, 0])
    r = np.unique(values[:, 1])
    if H.size * r.size != values.shape[0] or H.size < 2 or r.size < 2:
        raise SFKValueError("Chart CSV %s is not a rectangular lattice" % filename)
    HH, rr = np.meshgrid(H, r)
    if not (np.array_equal(values[:, 0], HH.ravel()) and np.array_equal(values[:, 1], rr.ravel())):
        raise SFKValueError("Chart CSV rows must be ordered by r, then H")
    hess = np.empty((values.shape[0], 2, 2))
    hess[:, 0, 0] = values[:, 5]
    hess[:, 0, 1] = hess[:, 1, 0] = values[:, 6]
    hess[:, 1, 1] = values[:, 7]
    return MetricChart(H, r, values[:, 2:4], values[:, 4], hess, values[:, 8], values[:, 9])


def _chart_node(pair, p, with_curvature, method, step, tol):
    res = Bunch(x=moment_map_exact(pair, p[0], p[1]), u=np.nan, hess=np.full((2, 2), np.nan), V=np.nan, s=np.nan, error=None)
    try:
        dx = d_xi(pair, p)
        res.V = dx.V
        res.hess = dx.jacobian.dot(dx.jacobian.T) / dx.V
        res.u = potential(pair, p, tol=tol)
        if with_curvature and dx.V > 0:
            if method == "exact":
                res.s = scalar_curvature_exact(pair, p)
            else:
                res.s = scalar_curvature(pair, p, step=step)
    except NumericalFailure as e:
        res.error = str(e)
    return res


def build_chart(pair, grid, P=None, scalar_curvature=True, method="fd", step=0.1, tol=None, n_jobs=1, verbose=False):
    """Evaluate the metric of a pair on a lattice.

    Parameters
    ----------
    pair : AxiHarmonicPair
    grid : GridSpec
        (H_min, H_max, nH, r_min, r_max, nr) with r_min > 0.
    P : DelzantPolytope, optional
        When given, moment images outside P are reported in ``errors``.
    scalar_curvature : bool, default True
        Compute the Abreu residual at each node.
    method : {'fd', 'exact'}
        Differenced (default) or chain-rule scalar curvature.
    n_jobs : int, default 1
        Parallel workers (joblib).

    Returns
    -------
    chart : MetricChart

    Raises
    ------
    InadmissibleParameter
        If V <= 0 at some node.
    """
    from sfk.validation import check_grid_spec, check_step

    grid = check_grid_spec(grid)
    step = check_step(step)
    if method not in ("fd", "exact"):
        raise ValueError("Unknown method %s. Choices are: ['fd', 'exact']" % method)
    H = np.linspace(grid.H_min, grid.H_max, grid.nH)
    r = np.linspace(grid.r_min, grid.r_max, grid.nr)
    points = [np.array([h, rr]) for rr in r for h in H]
    if n_jobs == 1:
        nodes = [_chart_node(pair, p, scalar_curvature, method, step, tol) for p in points]
    else:
        nodes = jl.Parallel(n_jobs=n_jobs)(
            jl.delayed(_chart_node)(pair, p, scalar_curvature, method, step, tol) for p in points
        )

    for p, node in zip(points, nodes):
        if node.V <= 0:
            raise InadmissibleParameter(pair.linear_coeff, point=p, value=node.V)

    errors = [(i, node.error) for i, node in enumerate(nodes) if node.error is not None]
    chart = MetricChart(
        H,
        r,
        [n.x for n in nodes],
        [n.u for n in nodes],
        [n.hess for n in nodes],
        [n.V for n in nodes],
        [n.s for n in nodes],
        pair=pair,
        errors=errors,
    )
    chart.errors.extend(chart.check(P))
    if verbose:
        print("chart %dx%d: %d node errors, max |s| = %.3g" % (grid.nH, grid.nr, len(chart.errors), np.nanmax(np.abs(chart.s_resid)) if scalar_curvature else np.nan))
    return chart


def asymptotic_volume_factor(pair, H, r):
    """V(H, r) and its limit det(1/2 (nu_1 + nu_d), nu) along fixed-H rays."""
    v = pair.far_direction
    nu = pair.linear_coeff
    return Bunch(V=d_xi(pair, np.array([H, r], dtype=float)).V, limit=v[0] * nu[1] - v[1] * nu[0])
