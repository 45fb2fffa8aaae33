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

"""Verification suites for scalar-flat toric metrics."""
from __future__ import division

import numpy as np
from scipy.integrate import nquad
from scipy.optimize import minimize_scalar
from sklearn.base import BaseEstimator
from sklearn.utils import Bunch, check_random_state

from sfk.correspondence import build_chart, hessian_u, moment_map, moment_map_exact, potential
from sfk.exceptions import AmbiguousClassification, NumericalFailure, SFKValueError
from sfk.harmonic import TaubNutParameter, is_admissible, make_pair
from sfk.inverse import GuilleminSampler, PairSampler, isothermal_coordinates
from sfk.numerics import fd_partial, fit_log_coefficient, sym2_eigh
from sfk.polytope import J, det2, edges, printed_anchor_spacings, vertices
from sfk.utils import DEFAULT_TOLERANCES, write_json
from sfk.validation import check_points

SUITES = ("flatness", "boundary", "anchors", "mu_difference", "asymptotic", "estimate", "factorization", "roundtrip", "sphere")


def suite_result(name, residuals, tolerance, points=None, notes=""):
    """Summarise residuals of a suite.

    NaN residuals (failed evaluations) count as failures.

    Returns
    -------
    Bunch with name, passed, max_residual, tolerance, samples, witness
    (the worst sample point when the suite fails) and notes.
    """
    residuals = np.atleast_1d(np.asarray(residuals, dtype=float))
    if residuals.size == 0:
        return Bunch(name=name, passed=True, max_residual=0.0, tolerance=tolerance, samples=0, witness=None, notes=notes)
    clean = np.where(np.isfinite(residuals), residuals, np.inf)
    worst = int(np.argmax(clean))
    passed = bool(clean[worst] <= tolerance)
    witness = None
    if not passed and points is not None:
        witness = np.asarray(points[worst], dtype=float)
    return Bunch(
        name=name,
        passed=passed,
        max_residual=float(clean[worst]),
        tolerance=tolerance,
        samples=int(residuals.size),
        witness=witness,
        notes=notes,
    )


class VerificationReport(object):
    """Collection of suite results.

    Parameters
    ----------
    seed : int, optional
        Seed used by the randomised suites.
    """

    def __init__(self, seed=None):
        self.seed = seed
        self.suites = []

    def add(self, suite):
        self.suites.append(suite)
        return suite

    @property
    def passed(self):
        return all(s.passed for s in self.suites)

    def failed(self):
        return [s for s in self.suites if not s.passed]

    def to_dict(self):
        return dict(
            seed=self.seed,
            suites=[
                {
                    "name": s.name,
                    "pass": s.passed,
                    "max_residual": s.max_residual,
                    "tolerance": s.tolerance,
                    "samples": s.samples,
                    "witness": s.witness,
                    "notes": s.notes,
                }
                for s in self.suites
            ],
        )

    def write(self, filename):
        return write_json(self.to_dict(), filename)

    def summary(self):
        lines = []
        for s in self.suites:
            line = "%-14s %s  max residual %.3e (tol %.1e, %d samples)" % (
                s.name,
                "PASS" if s.passed else "FAIL",
                s.max_residual,
                s.tolerance,
                s.samples,
            )
            if s.witness is not None:
                line += "  witness %s" % np.array2string(np.asarray(s.witness), precision=6)
            lines.append(line)
        return "\n".join(lines)


def verify_scalar_flat(chart, tol=None):
    """Abreu residual over the interior nodes of a chart."""
    tol = DEFAULT_TOLERANCES.flat_tol if tol is None else tol
    mask = chart.interior_mask()
    notes = "%d node errors" % len(chart.errors) if chart.errors else ""
    return suite_result("flatness", np.abs(chart.s_resid[mask]), tol, points=chart.points[mask], notes=notes)


def verify_scalar_flat_sampler(sampler, points, tol=None, step=0.1):
    """Abreu residual of an arbitrary potential at the given points of P."""
    tol = DEFAULT_TOLERANCES.boundary_tol if tol is None else tol
    residuals = []
    for x in points:
        try:
            residuals.append(abs(sampler.scalar_curvature(x, step=step)))
        except NumericalFailure:
            residuals.append(np.nan)
    return suite_result("flatness", residuals, tol, points=points, notes="potential sampler %s" % type(sampler).__name__)


def facet_approach_points(P):
    """A point on every facet, away from the vertices.

    Bounded facets use the midpoint of their edge, unbounded ones the point
    at lattice distance 1 from the vertex along the ray.
    """
    points = []
    for e in edges(P):
        if e.bounded:
            points.append(0.5 * (e.start + e.end))
        elif e.start is None:
            points.append(e.end - e.direction)
        else:
            points.append(e.start + e.direction)
    return np.array(points, dtype=float)


def _axis_points(pair):
    """One H value inside every facet interval of the axis."""
    H = []
    for lo, hi in pair.facet_intervals():
        if np.isinf(lo) and np.isinf(hi):
            H.append(0.0)
        elif np.isinf(lo):
            H.append(hi - 1.0)
        elif np.isinf(hi):
            H.append(lo + 1.0)
        else:
            H.append(0.5 * (lo + hi))
    return H


def verify_boundary(pair, P, tol=None):
    """Boundary behaviour near every facet.

    (a) xi - nu_k log r has no log r term as r -> 0 inside facet interval k;
    (b) u - u_P has no log l_k term along sequences approaching facet k.
    Both are least-squares fits of the log coefficient.
    """
    tol = DEFAULT_TOLERANCES.boundary_tol if tol is None else tol
    if len(pair.facet_intervals()) != P.n_facets:
        raise SFKValueError("Pair with %d facet intervals for a polytope with %d facets" % (len(pair.facet_intervals()), P.n_facets))
    radii = 10.0 ** -np.arange(1, 7)
    residuals, points, notes = [], [], []
    for k, H in enumerate(_axis_points(pair)):
        values = pair(H, radii) - np.outer(np.log(radii), P.normals[k])
        fit = fit_log_coefficient(radii, values, powers=(0, 2))
        residuals.append(np.max(np.abs(fit.log_coeff)))
        points.append((H, radii[-1]))

    sampler = PairSampler(pair, P)
    guillemin = GuilleminSampler(P)
    distances = 2.0 ** -np.arange(5, 11)
    for k, foot in enumerate(facet_approach_points(P)):
        nu = P.normals[k].astype(float)
        xs = foot + np.outer(distances, nu / nu.dot(nu))
        try:
            values = [sampler.potential(x) - guillemin.potential(x) for x in xs]
        except (NumericalFailure, SFKValueError) as e:
            residuals.append(np.nan)
            notes.append("facet %d: %s" % (k + 1, e))
        else:
            fit = fit_log_coefficient(distances, values, powers=(0, 1, 2))
            residuals.append(abs(fit.log_coeff))
        points.append(xs[-1])
    return suite_result("boundary", residuals, tol, points=points, notes="; ".join(notes))


def measured_anchors(pair, P, xatol=1e-12):
    """Axis points whose moment images are closest to the vertices of P."""
    verts = vertices(P)
    anchors = pair.anchors
    measured = []
    for i, v in enumerate(verts):
        lo = anchors[i] - 1.0 if i == 0 else 0.5 * (anchors[i - 1] + anchors[i])
        hi = anchors[i] + 1.0 if i == len(anchors) - 1 else 0.5 * (anchors[i] + anchors[i + 1])
        res = minimize_scalar(
            lambda H: np.linalg.norm(moment_map_exact(pair, H, 0.0) - v),
            bounds=(lo, hi),
            method="bounded",
            options=dict(xatol=xatol),
        )
        measured.append(res.x)
    return np.array(measured)


def verify_vertex_anchors(pair, P, tol=None, r_limit=1e-7, quad_tol=None):
    """Anchors map to vertices and their gaps are the lattice edge lengths.

    quad_tol is the tolerance of the path quadrature of mu.
    """
    tol = DEFAULT_TOLERANCES.anchor_tol if tol is None else tol
    verts = vertices(P)
    residuals, points = [], []
    for h, v in zip(pair.anchors, verts):
        p = np.array([h, r_limit])
        residuals.append(np.linalg.norm(moment_map(pair, p, tol=quad_tol) - v))
        points.append(p)
    measured = measured_anchors(pair, P)
    residuals.extend(np.abs(measured - pair.anchors))
    points.extend([(h, 0.0) for h in measured])
    lattice = np.array([e.lattice_length for e in edges(P) if e.bounded])
    residuals.extend(np.abs(np.diff(measured) - lattice))
    points.extend([(h, 0.0) for h in measured[1:]])
    if P.n_facets == 2:
        notes = "no bounded edges, spacing check vacuous"
    else:
        notes = "facet k occupies (h_{k-1}, h_k); gaps = lattice lengths %s; 1/(2 pi |nu|^2) constant would give %s" % (
            np.array2string(lattice, precision=8),
            np.array2string(printed_anchor_spacings(P), precision=8),
        )
    return suite_result("anchors", residuals, tol, points=points, notes=notes)


def _sample_half_plane(pair, n_points, random_state, r_range=(0.5, 3.0)):
    rng = check_random_state(random_state)
    lo = pair.anchors[0] - 2.0
    hi = pair.anchors[-1] + 2.0
    return np.column_stack((rng.uniform(lo, hi, n_points), rng.uniform(r_range[0], r_range[1], n_points)))


def verify_mu_difference(P, nu, n_points=50, random_state=0, tol=None, n_wright=5, quad_tol=None, fd_rtol=None):
    """(mu_TN - mu_ALE) / r^2 is the constant 1/2 (nu_2, -nu_1).

    The constant also solves the five-dimensional axisymmetric Laplace
    equation f_HH + f_rr + 3 f_r / r = 0, checked by differences.
    """
    tol = DEFAULT_TOLERANCES.mu_tol if tol is None else tol
    tn = make_pair(P, nu)
    ale = make_pair(P)
    points = _sample_half_plane(tn, n_points, random_state)
    expected = 0.5 * J.T.dot(tn.nu)
    f = np.array([(moment_map(tn, p, tol=quad_tol) - moment_map(ale, p, tol=quad_tol)) / p[1] ** 2 for p in points])
    residuals = list(np.max(np.abs(f - expected), axis=1))

    def g(p):
        return (moment_map_exact(tn, p[0], p[1]) - moment_map_exact(ale, p[0], p[1])) / p[1] ** 2

    def half_plane(p):
        return p[1] > 0

    n_rough = 0
    for p in points[:n_wright]:
        h = 0.1 * p[1]
        g_HH, g_rr, g_r = [
            fd_partial(g, p, index, h=h, domain=half_plane, rtol=fd_rtol) for index in ((0, 0), (1, 1), (1,))
        ]
        n_rough += sum(not d.converged for d in (g_HH, g_rr, g_r))
        residuals.append(np.max(np.abs(g_HH.value + g_rr.value + 3 * g_r.value / p[1])))
    points = np.vstack((points, points[:n_wright]))
    spread = np.max(np.abs(f - f.mean(axis=0)))
    notes = "constant %s, spread over samples %.3g, %d differences above fd_rel" % (
        np.array2string(expected, precision=8),
        spread,
        n_rough,
    )
    return suite_result("mu_difference", residuals, tol, points=points, notes=notes)


def verify_asymptotic_hessian(pair, P, H_values=(0.0,), radii=(1e2, 1e3, 1e4), tol=None):
    """Far-field limit of Hess u along fixed-H rays.

    For nu != 0 the limit is nu nu^T / det(v, nu), v = (nu_1 + nu_d) / 2, and
    the relative deviation must be within tol at r = 1e3 and decay like 1/r
    (fitted order within 0.2 of 1). For nu = 0, |Hess u| at the largest
    radius must be below the classification threshold.
    """
    radii = np.asarray(radii, dtype=float)
    v = 0.5 * (P.normals[0] + P.normals[-1])
    nu = pair.nu
    residuals, points, notes = [], [], []
    if pair.is_ale:
        tol = DEFAULT_TOLERANCES.estimate_tol if tol is None else tol
        for H in H_values:
            norms = [np.linalg.norm(hessian_u(pair, (H, r))) for r in radii]
            decaying = bool(np.all(np.diff(norms) < 0))
            residuals.append(norms[-1] if decaying else np.inf)
            points.append((H, radii[-1]))
            notes.append("H=%g: |Hess u| = %s" % (H, np.array2string(np.asarray(norms), precision=4)))
        return suite_result("asymptotic", residuals, tol, points=points, notes="; ".join(notes))

    tol = DEFAULT_TOLERANCES.asym_tol if tol is None else tol
    det = det2(v, nu)
    limit = np.outer(nu, nu) / det
    i_ref = int(np.argmin(np.abs(np.log(radii / 1e3))))
    for H in H_values:
        errors = np.array([np.linalg.norm(hessian_u(pair, (H, r)) - limit) for r in radii]) / np.linalg.norm(limit)
        order = -np.polyfit(np.log(radii), np.log(np.maximum(errors, 1e-300)), 1)[0]
        residuals.append(errors[i_ref] if abs(order - 1) <= 0.2 else np.inf)
        points.append((H, radii[i_ref]))
        notes.append("H=%g: relative errors %s, fitted order %.3f" % (H, np.array2string(errors, precision=4), order))
    notes.append("det(v, nu) = %.6g" % det)
    return suite_result("asymptotic", residuals, tol, points=points, notes="; ".join(notes))


def far_field_samples(pair, H_values=(-1.0, 0.0, 1.0), radii=(1e3, 1e4, 1e5)):
    """Hessians of u along fixed-H rays at large r."""
    H, r = np.meshgrid(np.asarray(H_values, dtype=float), np.asarray(radii, dtype=float))
    H, r = H.ravel(), r.ravel()
    hess = np.array([hessian_u(pair, (h, rr)) for h, rr in zip(H, r)])
    return Bunch(H=H, r=r, hess=hess)


def _check_samples(samples):
    if isinstance(samples, Bunch) or isinstance(samples, dict):
        return np.asarray(samples["r"], dtype=float), np.asarray(samples["hess"], dtype=float).reshape(-1, 2, 2)
    X = np.asarray(samples, dtype=float)
    if X.ndim != 2 or X.shape[1] != 5:
        raise SFKValueError("Far-field samples need columns H, r, h11, h12, h22")
    hess = np.empty((X.shape[0], 2, 2))
    hess[:, 0, 0] = X[:, 2]
    hess[:, 0, 1] = hess[:, 1, 0] = X[:, 3]
    hess[:, 1, 1] = X[:, 4]
    return X[:, 1], hess


def _estimate(samples, P, tol=None, min_radius=1e3, ale_threshold=None):
    tol = DEFAULT_TOLERANCES.estimate_tol if tol is None else tol
    ale_threshold = DEFAULT_TOLERANCES.estimate_tol if ale_threshold is None else ale_threshold
    r, hess = _check_samples(samples)
    if r.size < 2 or np.max(r) < min_radius:
        raise AmbiguousClassification(
            "AmbiguousClassification: far-field samples reach r = %.3g, need r >= %.3g" % (np.max(r), min_radius)
        )
    far = r >= min_radius
    r, hess = r[far], hess[far]
    entries = np.column_stack((hess[:, 0, 0], hess[:, 0, 1], hess[:, 1, 1]))
    if np.unique(r).size >= 2:
        # extrapolate Hess u = L + B / r to r = infinity
        design = np.column_stack((np.ones_like(r), 1.0 / r))
        coef = np.linalg.lstsq(design, entries, rcond=None)[0][0]
    else:
        coef = entries.mean(axis=0)
    limit = np.array([[coef[0], coef[1]], [coef[1], coef[2]]])
    norms = np.linalg.norm(entries, axis=1)
    order = np.argsort(r)
    decaying = norms[order][-1] < norms[order][0]
    if np.linalg.norm(limit) < ale_threshold and decaying:
        return Bunch(nu=np.zeros(2), is_ale=True, residual=np.linalg.norm(limit), limit=limit)

    v = 0.5 * (P.normals[0] + P.normals[-1])
    w, e = sym2_eigh(limit)
    e = e[:, 0]
    rank_defect = abs(w[1]) / abs(w[0])
    d = det2(v, e)
    if rank_defect > tol or abs(d) < tol:
        raise AmbiguousClassification(
            "AmbiguousClassification: far-field Hessian limit %s is not of the form nu nu^T / det(v, nu)"
            % np.array2string(limit, precision=6)
        )
    nu = w[0] * d * e
    if not is_admissible(P, nu):
        raise AmbiguousClassification("AmbiguousClassification: estimated nu %s is outside the admissible cone" % nu)
    fitted = np.outer(nu, nu) / det2(v, nu)
    residual = np.linalg.norm(fitted - limit) / np.linalg.norm(limit)
    if residual > tol:
        raise AmbiguousClassification("AmbiguousClassification: rank-one fit residual %.3g above %.3g" % (residual, tol))
    return Bunch(nu=nu, is_ale=False, residual=residual, limit=limit)


def estimate_parameter(samples, P, tol=None, min_radius=1e3):
    """Recover the Taub-NUT parameter from far-field Hessians.

    Parameters
    ----------
    samples : Bunch with r and hess, or array with columns H, r, h11, h12, h22
        Hessians of u sampled along fixed-H rays.
    P : DelzantPolytope
    tol : float, optional
        Tolerance of the rank-one fit.
    min_radius : float, default 1e3
        Samples below this radius are ignored; none above it is an error.

    Returns
    -------
    TaubNutParameter

    Raises
    ------
    AmbiguousClassification
    """
    return TaubNutParameter(_estimate(samples, P, tol=tol, min_radius=min_radius).nu)


class TaubNutEstimator(BaseEstimator):
    """Estimator of the Taub-NUT parameter from far-field Hessians.

    Parameters
    ----------
    polytope : DelzantPolytope
    tol : float, default 1e-2
        Tolerance of the rank-one fit.
    min_radius : float, default 1e3
    ale_threshold : float, default 1e-2
        Below this norm of the extrapolated Hessian the metric is ALE.

    Attributes
    ----------
    nu_ : ndarray, shape (2,)
    is_ale_ : bool
    residual_ : float
    limit_ : ndarray, shape (2, 2)
        Extrapolated far-field Hessian.
    """

    def __init__(self, polytope=None, tol=1e-2, min_radius=1e3, ale_threshold=1e-2):
        self.polytope = polytope
        self.tol = tol
        self.min_radius = min_radius
        self.ale_threshold = ale_threshold

    def fit(self, X, y=None):
        """Fit the parameter.

        Parameters
        ----------
        X : Bunch or array-like, shape (n_samples, 5)
            Far-field samples (see estimate_parameter).
        y : ignored
        """
        if self.polytope is None:
            raise ValueError("TaubNutEstimator needs a polytope")
        res = _estimate(X, self.polytope, tol=self.tol, min_radius=self.min_radius, ale_threshold=self.ale_threshold)
        self.nu_ = res.nu
        self.is_ale_ = res.is_ale
        self.residual_ = res.residual
        self.limit_ = res.limit
        return self


def verify_estimate(pair, P, tol=None):
    """Closed-loop recovery of nu from the far field of a pair."""
    tol = DEFAULT_TOLERANCES.estimate_tol if tol is None else tol
    samples = far_field_samples(pair)
    try:
        res = _estimate(samples, P, tol=tol)
    except AmbiguousClassification as e:
        return suite_result("estimate", [np.nan], tol, points=[(0.0, samples.r.max())], notes=str(e))
    if pair.is_ale:
        residual = 0.0 if res.is_ale else np.inf
    else:
        residual = np.linalg.norm(res.nu - pair.nu) / np.linalg.norm(pair.nu)
    notes = "estimated %s" % ("ale" if res.is_ale else np.array2string(res.nu, precision=8))
    return suite_result("estimate", [residual], tol, points=[(0.0, samples.r.max())], notes=notes)


def sphere_integral_check(R, epsabs=1e-13, epsrel=1e-13):
    """Integral of r^-2 over the sphere of radius R in R^5.

    A point of the sphere is (R cos a, R sin a w) with w on the unit
    3-sphere, so r = R sin a. The 3-sphere is parametrised by
    (cos b e^{i p}, sin b e^{i q}), with volume element sin b cos b db dp dq;
    the integrand does not depend on p and q.

    Returns
    -------
    Bunch with value, ratio = value / R^2 and expected = 4 pi^2.
    """
    if not R > 0:
        raise SFKValueError("Sphere radius must be positive, got %s" % R)

    def integrand(b, a):
        r = R * np.sin(a)
        return R ** 4 * np.sin(a) ** 3 * np.sin(b) * np.cos(b) / r ** 2

    value, _ = nquad(
        integrand, [[0, np.pi / 2], [0, np.pi]], opts=dict(epsabs=epsabs, epsrel=epsrel, limit=200)
    )
    value *= (2 * np.pi) ** 2
    return Bunch(value=value, ratio=value / R ** 2, expected=4 * np.pi ** 2)


def verify_sphere(radii=(1.0, 2.0, 5.0, 10.0), tol=1e-10, verbose=False):
    ratios = []
    for R in radii:
        res = sphere_integral_check(R)
        ratios.append(res.ratio)
        if verbose:
            print("R = %g: value / R^2 = %.12f" % (R, res.ratio))
    ratios = np.array(ratios)
    expected = 4 * np.pi ** 2
    residuals = np.abs(ratios - expected) / expected
    notes = "value / R^2 = %s" % ", ".join("%.12f" % q for q in ratios)
    return suite_result("sphere", residuals, tol, points=[(R, 0.0) for R in radii], notes=notes)


def verify_hessian_factorization(
    pair, P, n_points=50, random_state=0, tol=1e-5, step=0.05, quad_tol=None, newton_tol=None, fd_rtol=None
):
    """D xi D xi^T / V against differenced Hessians of the integrated potential.

    Also checks det(Hess u) r^2 = 1 to 1e-10. quad_tol, newton_tol and
    fd_rtol are passed to the quadrature, the moment-map inversion and the
    differences.
    """
    points = _sample_half_plane(pair, n_points, random_state, r_range=(0.5, 2.0))
    residuals = []
    det_errors = []
    n_rough = 0
    sampler = PairSampler(pair, P, tol=newton_tol, quad_tol=quad_tol)
    for p in points:
        x = moment_map_exact(pair, p[0], p[1])
        h = step * sampler.distance(x)

        def u(y):
            return potential(pair, sampler.locate(y), tol=quad_tol)

        fd = np.empty((2, 2))
        for i in range(2):
            for j in range(i, 2):
                d = fd_partial(u, x, (i, j), h=h, domain=sampler.contains, rtol=fd_rtol)
                n_rough += not d.converged
                fd[i, j] = fd[j, i] = d.value
        exact = hessian_u(pair, p)
        rel = np.linalg.norm(fd - exact) / np.linalg.norm(exact)
        det_error = abs(np.linalg.det(exact) * p[1] ** 2 - 1)
        residuals.append(max(rel, det_error))
        det_errors.append(det_error)
    notes = "max |det(Hess u) r^2 - 1| = %.3g, %d differences above fd_rel" % (max(det_errors), n_rough)
    return suite_result("factorization", residuals, tol, points=points, notes=notes)


def verify_roundtrip(pair, P, points=None, tol=1e-5, closedness_tol=1e-8, sampler=None, quad_tol=None, newton_tol=None):
    """Isothermal coordinates of the forward-built potential recover (H, r).

    The suite also fails when the loop integral of dH around some point
    exceeds closedness_tol. sampler defaults to the exact PairSampler of
    the pair.
    """
    if points is None:
        H = np.linspace(pair.anchors[0] - 1.0, pair.anchors[-1] + 1.0, 4)
        r = np.array([0.75, 1.5])
        HH, rr = np.meshgrid(H, r)
        points = np.column_stack((HH.ravel(), rr.ravel()))
    points = check_points(points, half_plane=True)
    if sampler is None:
        sampler = PairSampler(pair, P, tol=newton_tol, quad_tol=quad_tol)
    base = np.array([0.0, 1.0])
    base_x = moment_map_exact(pair, base[0], base[1])
    residuals = []
    closedness = []
    for p in points:
        x = moment_map_exact(pair, p[0], p[1])
        res = isothermal_coordinates(sampler, x, base_x=base_x, base_H=base[0], tol=quad_tol)
        residuals.append(np.max(np.abs(np.array([res.H, res.r]) - p)))
        closedness.append(abs(res.closedness_residual))
    worst = int(np.argmax(closedness))
    notes = "max closedness residual %.3g (tol %.1e)" % (closedness[worst], closedness_tol)
    result = suite_result("roundtrip", residuals, tol, points=points, notes=notes)
    if not closedness[worst] <= closedness_tol:
        result.passed = False
        result.witness = np.asarray(points[worst], dtype=float)
        result.notes = "dH not closed: " + notes
    return result


def run_verification(P, nu=None, suites=SUITES, grid=None, random_state=0, tolerances=None, method="fd", n_jobs=1, verbose=False):
    """Run the selected suites on the metric of P with parameter nu.

    Returns
    -------
    report : VerificationReport
    """
    tolerances = DEFAULT_TOLERANCES if tolerances is None else tolerances
    unknown = sorted(set(suites) - set(SUITES))
    if unknown:
        raise ValueError("Unknown suites %s. Choices are: %s" % (unknown, list(SUITES)))
    nu = TaubNutParameter.parse(nu)
    pair = make_pair(P, nu) if set(suites) - {"sphere"} else None
    report = VerificationReport(seed=random_state)
    for name in SUITES:
        if name not in suites:
            continue
        if verbose:
            print("running suite %s" % name)
        if name == "flatness":
            chart = build_chart(
                pair, grid or "-4:4:17,0.5:4:8", P=P, method=method, tol=tolerances.quad_abs, n_jobs=n_jobs
            )
            report.add(verify_scalar_flat(chart, tol=tolerances.flat_tol))
        elif name == "boundary":
            report.add(verify_boundary(pair, P, tol=tolerances.boundary_tol))
        elif name == "anchors":
            report.add(verify_vertex_anchors(pair, P, tol=tolerances.anchor_tol, quad_tol=tolerances.quad_abs))
        elif name == "mu_difference":
            if nu.is_ale:
                report.add(suite_result(name, [], tolerances.mu_tol, notes="vacuous for nu = 0"))
            else:
                report.add(
                    verify_mu_difference(
                        P,
                        nu,
                        random_state=random_state,
                        tol=tolerances.mu_tol,
                        quad_tol=tolerances.quad_abs,
                        fd_rtol=tolerances.fd_rel,
                    )
                )
        elif name == "asymptotic":
            tol = tolerances.estimate_tol if nu.is_ale else tolerances.asym_tol
            report.add(verify_asymptotic_hessian(pair, P, tol=tol))
        elif name == "estimate":
            report.add(verify_estimate(pair, P, tol=tolerances.estimate_tol))
        elif name == "factorization":
            report.add(
                verify_hessian_factorization(
                    pair,
                    P,
                    n_points=10,
                    random_state=random_state,
                    quad_tol=tolerances.quad_abs,
                    newton_tol=tolerances.newton_abs,
                    fd_rtol=tolerances.fd_rel,
                )
            )
        elif name == "roundtrip":
            report.add(verify_roundtrip(pair, P, quad_tol=tolerances.quad_abs, newton_tol=tolerances.newton_abs))
        elif name == "sphere":
            report.add(verify_sphere(verbose=verbose))
    return report
