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

"""Axisymmetric harmonic pairs on the half-plane.

A pair xi = (xi_1, xi_2) solves xi_HH + xi_rr + xi_r / r = 0 on
{(H, r) : r > 0}. The pairs built here are finite combinations of
log r, log(H - h_i + rho_i) with rho_i = sqrt((H - h_i)^2 + r^2), H and a
constant, so every partial derivative is available in closed form.
"""
from __future__ import division

from math import factorial

import numpy as np
import six
from sklearn.utils import check_random_state

from sfk.exceptions import InadmissibleParameter, NumericalUnderflow, SFKValueError
from sfk.polytope import anchor_spacings, det2, vertices

# multi-indices (derivatives in H, derivatives in r) up to order 3
MULTI_INDICES = [(a, n - a) for n in range(4) for a in range(n, -1, -1)]


def _multi_indices(order):
    if order not in (0, 1, 2, 3):
        raise ValueError("Derivative order must be between 0 and 3, got %s" % order)
    return [m for m in MULTI_INDICES if sum(m) <= order]


def log_r_partials(H, r, order=3):
    """Partials of log r."""
    zero = np.zeros(np.broadcast(H, r).shape)
    out = {}
    for a, b in _multi_indices(order):
        if a > 0:
            out[a, b] = zero
        elif b == 0:
            out[a, b] = np.log(r) + zero
        else:
            # d^b/dr^b log r = (-1)^(b+1) (b-1)! / r^b
            out[a, b] = (-1) ** (b + 1) * factorial(b - 1) / r ** b + zero
    return out


def monomial_partials(H, r, powers, order=3):
    """Partials of H**p r**q."""
    p, q = powers
    zero = np.zeros(np.broadcast(H, r).shape)
    out = {}
    for a, b in _multi_indices(order):
        if a > p or b > q:
            out[a, b] = zero
            continue
        cH = factorial(p) // factorial(p - a)
        cr = factorial(q) // factorial(q - b)
        out[a, b] = cH * cr * np.power(H, p - a) * np.power(r, q - b) + zero
    return out


def log_jump_partials(H, r, anchor=0.0, order=3):
    """Partials of log(H - anchor + rho), rho = sqrt((H - anchor)^2 + r^2).

    For H < anchor the argument is computed as r^2 / (rho - (H - anchor))
    so that it keeps full relative precision as r -> 0.
    """
    Hs = np.asarray(H, dtype=float) - anchor
    r = np.asarray(r, dtype=float)
    Hs, r = np.broadcast_arrays(Hs, r)
    rho = np.hypot(Hs, r)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(Hs >= 0, Hs + rho, r * r / (rho - Hs))
    if np.any(q == 0):
        raise NumericalUnderflow(
            "NumericalUnderflow: log(H - h + rho) underflows at r = %.3g; move away from the boundary" % np.min(r)
        )
    out = {}
    indices = _multi_indices(order)
    if (0, 0) in indices:
        with np.errstate(divide="ignore"):
            out[0, 0] = np.where(Hs >= 0, np.log(q), 2 * np.log(r) - np.log(rho - Hs))
    if order >= 1:
        out[1, 0] = 1.0 / rho
        out[0, 1] = r / (rho * q)
    if order >= 2:
        rho3 = rho ** 3
        out[2, 0] = -Hs / rho3
        out[1, 1] = -r / rho3
        out[0, 2] = Hs / rho3 - 1.0 / (rho * q)
    if order >= 3:
        rho5 = rho ** 5
        out[3, 0] = -1.0 / rho3 + 3 * Hs * Hs / rho5
        out[2, 1] = 3 * Hs * r / rho5
        out[1, 2] = -1.0 / rho3 + 3 * r * r / rho5
        out[0, 3] = -3 * Hs * r / rho5 + r * (q + rho) / (rho3 * q * q)
    return out


class AxiHarmonicPair(object):
    """Pair of axisymmetric harmonic functions.

    xi(H, r) = log_r_coeff log r
               + sum_i jump_coeffs[i] log(H - anchors[i] + rho_i)
               + linear_coeff H + constant
               (+ polynomial terms, used for controls only)

    Parameters
    ----------
    log_r_coeff : array-like, shape (2,)
    jump_coeffs : array-like, shape (m, 2)
    linear_coeff : array-like, shape (2,)
        The Taub-NUT parameter nu (zero for ALE pairs).
    anchors : array-like, shape (m,)
        Positions h_i of the jumps on the axis r = 0.
    constant : array-like, shape (2,), optional
    polynomial : dict, optional
        Maps exponents (p, q) to the 2-vector coefficient of H**p r**q.
        These terms are not harmonic in general.
    vertex : array-like, shape (2,), optional
        Moment image of the first anchor (h_1, 0), default the origin.
    """

    def __init__(self, log_r_coeff, jump_coeffs, linear_coeff=(0, 0), anchors=(), constant=(0, 0), polynomial=None, vertex=(0, 0)):
        self.log_r_coeff = np.array(log_r_coeff, dtype=float).reshape(2)
        self.jump_coeffs = np.array(jump_coeffs, dtype=float).reshape(-1, 2)
        self.linear_coeff = np.array(linear_coeff, dtype=float).reshape(2)
        self.anchors = np.array(anchors, dtype=float).reshape(-1)
        self.constant = np.array(constant, dtype=float).reshape(2)
        self.vertex = np.array(vertex, dtype=float).reshape(2)
        self.polynomial = {tuple(k): np.array(v, dtype=float).reshape(2) for k, v in six.iteritems(polynomial or {})}
        if self.jump_coeffs.shape[0] != self.anchors.shape[0]:
            raise SFKValueError(
                "Got %d jump coefficients for %d anchors" % (self.jump_coeffs.shape[0], self.anchors.shape[0])
            )
        if np.any(np.diff(self.anchors) <= 0):
            raise SFKValueError("Anchors must be strictly increasing, got %s" % self.anchors)
        for arr in (self.log_r_coeff, self.jump_coeffs, self.linear_coeff, self.anchors, self.constant, self.vertex):
            arr.setflags(write=False)

    @property
    def nu(self):
        return self.linear_coeff

    @property
    def is_ale(self):
        return not np.any(self.linear_coeff)

    def replace(self, **kwargs):
        params = dict(
            log_r_coeff=self.log_r_coeff,
            jump_coeffs=self.jump_coeffs,
            linear_coeff=self.linear_coeff,
            anchors=self.anchors,
            constant=self.constant,
            polynomial=self.polynomial,
            vertex=self.vertex,
        )
        params.update(kwargs)
        return AxiHarmonicPair(**params)

    def facet_intervals(self):
        """H-interval of the axis that maps onto facet k, for k = 1..m+1."""
        bounds = np.concatenate(([-np.inf], self.anchors, [np.inf]))
        return list(zip(bounds[:-1], bounds[1:]))

    def facet_log_coeff(self, k):
        """Coefficient of log r in xi as r -> 0 with H inside interval k (0-based)."""
        return self.log_r_coeff + 2 * self.jump_coeffs[k:].sum(axis=0)

    @property
    def far_direction(self):
        """Coefficient of log r at large distance along fixed-H rays, 1/2 (nu_1 + nu_d)."""
        return self.log_r_coeff + self.jump_coeffs.sum(axis=0)

    def partials(self, H, r, order=3):
        """Value and partial derivatives of xi.

        Parameters
        ----------
        H, r : float or array-like
            Half-plane coordinates, r > 0. Arrays broadcast.
        order : int, 0..3

        Returns
        -------
        dict mapping (i, j) to d^i/dH^i d^j/dr^j xi, each of shape (..., 2).
        """
        H = np.asarray(H, dtype=float)
        r = np.asarray(r, dtype=float)
        if np.any(~(r > 0)):
            raise SFKValueError("Harmonic pairs are evaluated at r > 0 only")
        indices = _multi_indices(order)
        shape = np.broadcast(H, r).shape
        out = {m: np.zeros(shape + (2,)) for m in indices}

        def _add(partials, coeff):
            for m in indices:
                out[m] += partials[m][..., None] * coeff

        if np.any(self.log_r_coeff):
            _add(log_r_partials(H, r, order), self.log_r_coeff)
        for h, c in zip(self.anchors, self.jump_coeffs):
            if np.any(c):
                _add(log_jump_partials(H, r, h, order), c)
        if np.any(self.linear_coeff):
            _add(monomial_partials(H, r, (1, 0), order), self.linear_coeff)
        for powers, c in six.iteritems(self.polynomial):
            _add(monomial_partials(H, r, powers, order), c)
        out[0, 0] += self.constant
        return out

    def __call__(self, H, r):
        return self.partials(H, r, order=0)[0, 0]

    def jet(self, p, order=3):
        """Derivative tensors at one point.

        Returns
        -------
        list [xi, D1, D2, D3] (up to order) where Dn has shape (2,) + (2,)*n,
        first index the component and the others derivative directions
        (0 = H, 1 = r).
        """
        H, r = p
        partials = self.partials(H, r, order=order)
        jet = [partials[0, 0]]
        for n in range(1, order + 1):
            T = np.empty((2,) + (2,) * n)
            for idx in np.ndindex(*(2,) * n):
                a = n - sum(idx)
                T[(slice(None),) + idx] = partials[a, n - a]
            jet.append(T)
        return jet

    def __repr__(self):
        return "AxiHarmonicPair(log_r=%s, jumps=%s, anchors=%s, nu=%s)" % (
            self.log_r_coeff.tolist(),
            self.jump_coeffs.tolist(),
            self.anchors.tolist(),
            self.linear_coeff.tolist(),
        )


def evaluate(pair, p, order=0):
    """Value and all partials of xi at p up to order (dict keyed by (i, j))."""
    return pair.partials(p[0], p[1], order=order)


def pde_residual(pair, p):
    """Residual xi_HH + xi_rr + xi_r / r at p, one entry per component."""
    d = evaluate(pair, p, order=2)
    return d[2, 0] + d[0, 2] + d[0, 1] / np.asarray(p[1], dtype=float)[..., None]


class TaubNutParameter(object):
    """The vector nu selecting a member of the family; nu = 0 is ALE."""

    def __init__(self, nu=(0.0, 0.0)):
        self.nu = np.array(nu, dtype=float).reshape(2)
        if not np.all(np.isfinite(self.nu)):
            raise SFKValueError("nu must be finite, got %s" % self.nu)
        self.nu.setflags(write=False)

    @classmethod
    def parse(cls, text):
        """Parse 'ale' or 'a,b'."""
        if isinstance(text, TaubNutParameter):
            return text
        if text is None or (isinstance(text, six.string_types) and text.strip().lower() == "ale"):
            return cls()
        if isinstance(text, six.string_types):
            try:
                values = [float(t) for t in text.split(",")]
            except ValueError:
                raise SFKValueError("Cannot parse nu %r, expected 'ale' or 'a,b'" % text)
        else:
            values = list(text)
        if len(values) != 2:
            raise SFKValueError("nu needs two components, got %r" % (text,))
        return cls(values)

    @property
    def is_ale(self):
        return not np.any(self.nu)

    def __repr__(self):
        return "TaubNutParameter(ale)" if self.is_ale else "TaubNutParameter(%s)" % self.nu.tolist()


def admissible_cone(P):
    """Normals bounding the admissible cone: nu with det(nu_1, nu) > 0 and det(nu_d, nu) > 0."""
    return P.normals[0].astype(float), P.normals[-1].astype(float)


def is_admissible(P, nu, margin=0.0):
    """Cone test; margin bounds the sine of the angle to each boundary ray."""
    nu = np.asarray(getattr(nu, "nu", nu), dtype=float)
    if not np.any(nu):
        return True
    first, last = admissible_cone(P)
    n = np.linalg.norm(nu)
    return bool(
        det2(first, nu) > margin * n * np.linalg.norm(first) and det2(last, nu) > margin * n * np.linalg.norm(last)
    )


def make_pair(P, nu=None, check_admissible=True):
    """Harmonic pair of the scalar-flat metric of P with parameter nu.

    xi = nu_d log r + 1/2 sum_i (nu_i - nu_{i+1}) log(H - h_i + rho_i) + nu H,
    with anchors h_i from :func:`sfk.polytope.anchor_spacings`. Near the
    axis, for H between h_{k-1} and h_k, xi = nu_k log r + O(1).

    Parameters
    ----------
    P : DelzantPolytope
    nu : TaubNutParameter, array-like or 'ale', optional
        Default is the ALE metric.
    check_admissible : bool, default True
        Reject nu outside the admissible cone.
    """
    nu = TaubNutParameter.parse(nu)
    if check_admissible and not is_admissible(P, nu):
        raise InadmissibleParameter(nu.nu)
    normals = P.normals.astype(float)
    return AxiHarmonicPair(
        log_r_coeff=normals[-1],
        jump_coeffs=0.5 * (normals[:-1] - normals[1:]),
        linear_coeff=nu.nu,
        anchors=anchor_spacings(P),
        vertex=vertices(P)[0],
    )


def sample_admissible(P, n_samples=10, radius=(0.5, 2.0), margin=0.2, random_state=None, max_trials=100000):
    """Draw parameters from the interior of the admissible cone."""
    rng = check_random_state(random_state)
    samples = []
    for _ in range(max_trials):
        angle = rng.uniform(0, 2 * np.pi)
        rad = rng.uniform(*radius)
        nu = rad * np.array([np.cos(angle), np.sin(angle)])
        if is_admissible(P, nu, margin=margin):
            samples.append(nu)
            if len(samples) == n_samples:
                return np.array(samples)
    raise ValueError("Could not sample %d admissible parameters with margin %g" % (n_samples, margin))
