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

"""Numerical kernels: path quadrature, finite differences, damped Newton."""
from __future__ import division

import warnings

import numpy as np
from scipy.integrate import quad_vec
from six.moves import range
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils import Bunch

from sfk.exceptions import NewtonDivergence, PathLeavesHalfPlane, QuadratureFailure, StencilLeavesDomain
from sfk.utils import DEFAULT_TOLERANCES

BASE_POINT = np.array([0.0, 1.0])


def canonical_path(start, end):
    """Deterministic polyline between two half-plane points.

    The path climbs (or stays) to the larger of the two radii, moves
    horizontally, then descends, so it never goes below min(r_start, r_end).
    """
    start = np.asarray(start, dtype=float)
    end = np.asarray(end, dtype=float)
    top = max(start[1], end[1])
    nodes = [start, np.array([start[0], top]), np.array([end[0], top]), end]
    path = [nodes[0]]
    for node in nodes[1:]:
        if np.any(node != path[-1]):
            path.append(node)
    return np.array(path)


def square_loop(center, half_side):
    """Closed counter-clockwise square polyline centred at center."""
    c = np.asarray(center, dtype=float)
    h = float(half_side)
    return c + h * np.array([[-1, -1], [1, -1], [1, 1], [-1, 1], [-1, -1]], dtype=float)


def integrate_1form(form, path, tol=None, half_plane=True, limit=2000):
    """Integrate a 1-form along a polyline.

    Parameters
    ----------
    form : callable
        form(p) returns the covector(s) at the point p, shape (2,) for a
        single form or (k, 2) for k forms integrated together.
    path : array-like, shape (n_nodes, 2)
        Polyline nodes. Segments are straight. A single node (a path from a
        point to itself) integrates to zero.
    tol : float, optional
        Absolute tolerance per segment (default Tolerances.quad_abs).
    half_plane : bool, default True
        If True, every node must have positive second coordinate (r > 0).

    Returns
    -------
    value : float or ndarray
        The integral.
    error : float
        Sum of the quadrature error estimates of the segments.
    """
    tol = DEFAULT_TOLERANCES.quad_abs if tol is None else tol
    path = np.asarray(path, dtype=float)
    if path.ndim != 2 or path.shape[1] != 2 or path.shape[0] < 1:
        raise ValueError("A path needs 2-dimensional nodes, got shape %s" % (path.shape,))
    if half_plane and np.any(path[:, 1] <= 0):
        raise PathLeavesHalfPlane("PathLeavesHalfPlane: path node with r <= 0 in %s" % path.tolist())

    total, error, integrated = 0.0, 0.0, False
    for a, b in zip(path[:-1], path[1:]):
        d = b - a
        if not np.any(d):
            continue

        def integrand(t, a=a, d=d):
            return np.dot(form(a + t * d), d)

        value, err, info = quad_vec(integrand, 0.0, 1.0, epsabs=tol, epsrel=1e-14, limit=limit, full_output=True)
        if not info.success or err > max(tol, 1e-14 * np.max(np.abs(value))):
            raise QuadratureFailure(
                "QuadratureFailure: error estimate %.3g above %.3g on segment %s -> %s" % (err, tol, a, b)
            )
        total = total + value
        error += err
        integrated = True
    if not integrated:
        total = np.zeros_like(np.dot(form(path[0]), np.zeros(2)))[()]
    return total, error


def richardson(estimate, h, con=1.4, ntab=10, safe=2.0):
    """Ridders' extrapolation of estimate(h) towards h = 0.

    The estimate must have an error expansion in even powers of h, as
    central differences do. With ``con=2, ntab=2`` this is the single
    Richardson step (4 D(h/2) - D(h)) / 3.

    Returns
    -------
    value, error : extrapolated estimate and its error indicator.
    """
    if h == 0.0:
        raise ValueError("h must be nonzero")

    def nrm(x):
        return np.max(np.abs(x))

    con2 = con * con
    a = {}
    hh = h
    a[0, 0] = estimate(hh)
    result, err = a[0, 0], np.inf
    for i in range(1, ntab):
        hh = hh / con
        a[0, i] = estimate(hh)
        fac = con2
        for j in range(1, i + 1):
            a[j, i] = (a[j - 1, i] * fac - a[j - 1, i - 1]) / (fac - 1.0)
            fac = con2 * fac
            errt = max(nrm(a[j, i] - a[j - 1, i]), nrm(a[j, i] - a[j - 1, i - 1]))
            if errt <= err:
                err = errt
                result = a[j, i]
        # higher order is worse by a significant factor: stop
        if nrm(a[i, i] - a[i - 1, i - 1]) >= safe * err:
            break
    return result, err


def _check_stencil(domain, points):
    if domain is None:
        return
    for p in points:
        if not domain(p):
            raise StencilLeavesDomain("StencilLeavesDomain: stencil point %s outside the domain" % (p,))


def _fd_result(value, error, rtol):
    rtol = DEFAULT_TOLERANCES.fd_rel if rtol is None else rtol
    converged = bool(error <= rtol * max(1.0, np.max(np.abs(value))))
    return Bunch(value=value, error=error, converged=converged)


def fd_derivative(f, x, order=1, h=1e-2, domain=None, rtol=None, **kwargs):
    """Derivative of a univariate function by extrapolated central differences.

    Parameters
    ----------
    f : callable
        Scalar (or vector-valued) function of a real variable.
    x : float
        Evaluation point.
    order : {1, 2}
        Derivative order.
    h : float
        Initial step; successive steps shrink by the tableau factor.
    domain : callable, optional
        domain(t) is True where f may be evaluated. The widest stencil is
        checked before any evaluation.
    rtol : float, optional
        Relative accuracy target (default Tolerances.fd_rel); the result
        flags whether the error indicator meets it.

    Returns
    -------
    Bunch with value, error and converged.
    """
    if order not in (1, 2):
        raise ValueError("Only first and second derivatives are supported, got order %s" % order)
    _check_stencil(domain, [x - h, x + h])
    if order == 1:

        def estimate(hh):
            return (f(x + hh) - f(x - hh)) / (2.0 * hh)

    else:
        fx = f(x)

        def estimate(hh):
            return (f(x + hh) - 2.0 * fx + f(x - hh)) / (hh * hh)

    value, error = richardson(estimate, h, **kwargs)
    return _fd_result(value, error, rtol)


def fd_partial(f, x, index, h=1e-2, domain=None, rtol=None, **kwargs):
    """Partial derivative of a multivariate function.

    index is a tuple of coordinate indices: ``(i,)`` for the first
    derivative along e_i, ``(i, j)`` for the second derivative.
    """
    x = np.asarray(x, dtype=float)
    eye = np.eye(x.size)
    if len(index) == 1:
        e = eye[index[0]]
        return fd_derivative(lambda t: f(x + t * e), 0.0, order=1, h=h,
                             domain=None if domain is None else (lambda t: domain(x + t * e)), rtol=rtol, **kwargs)
    if len(index) != 2:
        raise ValueError("Only first and second partial derivatives are supported, got %s" % (index,))
    i, j = index
    if i == j:
        e = eye[i]
        return fd_derivative(lambda t: f(x + t * e), 0.0, order=2, h=h,
                             domain=None if domain is None else (lambda t: domain(x + t * e)), rtol=rtol, **kwargs)

    ei, ej = eye[i], eye[j]
    _check_stencil(domain, [x + s * h * ei + q * h * ej for s in (-1, 1) for q in (-1, 1)])

    def estimate(hh):
        return (
            f(x + hh * ei + hh * ej) - f(x + hh * ei - hh * ej) - f(x - hh * ei + hh * ej) + f(x - hh * ei - hh * ej)
        ) / (4.0 * hh * hh)

    value, error = richardson(estimate, h, **kwargs)
    return _fd_result(value, error, rtol)


def newton2(func, jacobian, target, guess, tol=None, max_iter=50, damping=True, domain=None, polish=2, verbose=False):
    """Solve func(p) = target for a planar map by damped Newton iterations.

    Parameters
    ----------
    func, jacobian : callable
        The map and its 2x2 Jacobian.
    target : array-like, shape (2,)
    guess : array-like, shape (2,)
    tol : float, optional
        Accepted residual norm (default Tolerances.newton_abs).
    max_iter : int, default 50
    damping : bool, default True
        Backtrack the Newton step until the residual decreases.
    domain : callable, optional
        domain(p) is False for points where func is undefined; such trial
        points are rejected by the line search.
    polish : int, default 2
        Extra full steps once the tolerance is met, kept only if they
        decrease the residual.

    Returns
    -------
    Bunch with x (solution), residual and n_iter.
    """
    tol = DEFAULT_TOLERANCES.newton_abs if tol is None else tol
    target = np.asarray(target, dtype=float)
    x = np.array(guess, dtype=float)
    if domain is not None and not domain(x):
        raise ValueError("Newton guess %s outside the domain" % (x,))

    res = func(x) - target
    rnorm = np.linalg.norm(res)
    best, best_norm = x.copy(), rnorm
    n_iter = 0

    def _step(x, res):
        J = np.asarray(jacobian(x), dtype=float)
        try:
            if np.linalg.cond(J) > 1e14:
                raise np.linalg.LinAlgError
            return np.linalg.solve(J, -res)
        except np.linalg.LinAlgError:
            # least-squares step with a small regularisation
            mu = 1e-10 * max(1.0, np.linalg.norm(J))
            return np.linalg.solve(J.T.dot(J) + mu * np.eye(2), -J.T.dot(res))

    while rnorm > tol and n_iter < max_iter:
        n_iter += 1
        delta = _step(x, res)
        step = 1.0
        while True:
            trial = x + step * delta
            ok = domain is None or domain(trial)
            if ok:
                res_trial = func(trial) - target
                rnorm_trial = np.linalg.norm(res_trial)
                if not damping or rnorm_trial < (1 - 0.5 * step) * rnorm:
                    break
            step *= 0.5
            if step < 1e-6:
                break
        if step < 1e-6:
            # line search stalled
            break
        x, res, rnorm = trial, res_trial, rnorm_trial
        if verbose:
            print("newton iter %d: residual %.3e, step %.3g" % (n_iter, rnorm, step))
        if rnorm < best_norm:
            best, best_norm = x.copy(), rnorm

    if best_norm > tol:
        raise NewtonDivergence(best, best_norm, n_iter)

    x, rnorm = best, best_norm
    for _ in range(polish):
        trial = x + _step(x, func(x) - target)
        if domain is not None and not domain(trial):
            break
        rnorm_trial = np.linalg.norm(func(trial) - target)
        if rnorm_trial >= rnorm:
            break
        x, rnorm = trial, rnorm_trial
    if rnorm > 1e-13 * max(1.0, np.linalg.norm(target)) and polish:
        warnings.warn("Newton polishing stalled at residual %.3g." % rnorm, ConvergenceWarning)
    return Bunch(x=x, residual=rnorm, n_iter=n_iter)


def fit_log_coefficient(t, values, powers=(0,)):
    """Fit values ~ b log(t) + sum_k c_k t**k by least squares.

    Parameters
    ----------
    t : array-like, shape (n,)
        Positive abscissae (distances to a singular locus).
    values : array-like, shape (n,) or (n, m)
    powers : tuple of int
        Regular terms of the model.

    Returns
    -------
    Bunch with log_coeff (b), coefficients and residual norm.
    """
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(t <= 0):
        raise ValueError("Log-coefficient fitting needs positive abscissae")
    design = np.column_stack([np.log(t)] + [t ** k for k in powers])
    if design.shape[0] < design.shape[1]:
        raise ValueError("Need at least %d samples, got %d" % (design.shape[1], design.shape[0]))
    coefficients, _, _, _ = np.linalg.lstsq(design, values, rcond=None)
    residual = np.linalg.norm(design.dot(coefficients) - values)
    return Bunch(log_coeff=coefficients[0], coefficients=coefficients, residual=residual)


def sym2_eigh(matrix):
    """Eigen-decomposition of a symmetric 2x2 matrix, largest eigenvalue first."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (2, 2):
        raise ValueError("Expected a 2x2 matrix, got shape %s" % (matrix.shape,))
    w, v = np.linalg.eigh(0.5 * (matrix + matrix.T))
    return w[::-1], v[:, ::-1]
