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

"""Strictly unbounded Delzant polygons.

Facets are stored in order: facet i has inward primitive normal nu_i and
offset lambda_i, so that P = {x : x . nu_i - lambda_i > 0}. Consecutive
normals satisfy det(nu_i, nu_{i+1}) = -1; facets 1 and d carry the
unbounded edges. Vertex i is the intersection of facets i and i+1.
"""
from __future__ import division

import json

import numpy as np
from scipy.optimize import linprog
from sklearn.utils import Bunch
from sklearn.utils.validation import check_array

from sfk.exceptions import (
    DegenerateIntersection,
    DelzantViolation,
    EmptyInterior,
    FacetOrderViolation,
    NonPrimitiveNormal,
    ParallelUnboundedEdges,
    SFKValueError,
    UnknownPolytopeKey,
)

_POLYTOPE_KEYS = ("name", "normals", "lambdas")

# quarter turn, J(a, b) = (-b, a)
J = np.array([[0.0, -1.0], [1.0, 0.0]])


def det2(a, b):
    """Determinant of the 2x2 matrix with columns a and b."""
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


class DelzantPolytope(object):
    """Validated strictly unbounded Delzant polygon.

    Instances are immutable; build them with :func:`validate`.

    Attributes
    ----------
    normals : ndarray of int, shape (d, 2)
    lambdas : ndarray of float, shape (d,)
    name : str
    """

    def __init__(self, normals, lambdas, name=""):
        self.normals = np.array(normals, dtype=int)
        self.lambdas = np.array(lambdas, dtype=float)
        self.normals.setflags(write=False)
        self.lambdas.setflags(write=False)
        self.name = name

    @property
    def n_facets(self):
        return self.normals.shape[0]

    @property
    def facets(self):
        return [(tuple(int(c) for c in n), float(l)) for n, l in zip(self.normals, self.lambdas)]

    def to_dict(self):
        return dict(name=self.name, normals=self.normals.tolist(), lambdas=self.lambdas.tolist())

    def __eq__(self, other):
        return (
            isinstance(other, DelzantPolytope)
            and np.array_equal(self.normals, other.normals)
            and np.array_equal(self.lambdas, other.lambdas)
        )

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.normals.tobytes(), self.lambdas.tobytes()))

    def __repr__(self):
        return "DelzantPolytope(name=%r, facets=%s)" % (self.name, self.facets)


def _split_facets(raw_facets):
    if isinstance(raw_facets, DelzantPolytope):
        return raw_facets.normals, raw_facets.lambdas, raw_facets.name
    raw_facets = list(raw_facets)
    normals = np.array([f[0] for f in raw_facets], dtype=float)
    lambdas = np.array([f[1] for f in raw_facets], dtype=float)
    return normals, lambdas, None


def _intersections(normals, lambdas):
    verts = []
    for i in range(normals.shape[0] - 1):
        A = np.vstack((normals[i], normals[i + 1])).astype(float)
        if abs(np.linalg.det(A)) < 1e-12:
            raise DegenerateIntersection("Facets %d and %d do not intersect in a point" % (i + 1, i + 2))
        verts.append(np.linalg.solve(A, lambdas[i : i + 2]))
    return np.array(verts).reshape(-1, 2)


def _interior_margin(normals, lambdas):
    """Largest t <= 1 such that a point has distance >= t from every facet line."""
    norms = np.linalg.norm(normals, axis=1)
    A_ub = np.column_stack((-normals, norms))
    res = linprog(
        c=[0.0, 0.0, -1.0], A_ub=A_ub, b_ub=-lambdas, bounds=[(None, None), (None, None), (None, 1.0)], method="highs"
    )
    if res.status != 0:
        raise EmptyInterior("(linear program status %d)" % res.status)
    return res.x[2], res.x[:2]


def validate(raw_facets, name=None):
    """Validate raw facet data and build a DelzantPolytope.

    Parameters
    ----------
    raw_facets : list of (normal, offset) or DelzantPolytope
        Facets in boundary order.
    name : str, optional
        Label of the polytope.

    Returns
    -------
    P : DelzantPolytope

    Raises
    ------
    SFKValueError
        The first violated invariant; its ``violations`` attribute lists
        every violation found.
    """
    normals, lambdas, old_name = _split_facets(raw_facets)
    name = name if name is not None else (old_name or "")
    if normals.ndim != 2 or normals.shape[1] != 2 or normals.shape[0] != lambdas.shape[0]:
        raise SFKValueError("Facets must be pairs of a 2-vector and a real offset")
    d = normals.shape[0]
    if d < 2:
        raise SFKValueError("A strictly unbounded polytope needs at least 2 facets, got %d" % d)
    if not np.all(np.isfinite(lambdas)):
        raise SFKValueError("Offsets must be finite numbers")

    violations = []
    for i, n in enumerate(normals):
        if not np.all(n == np.round(n)) or np.gcd.reduce(np.abs(n).astype(int)) != 1:
            violations.append(NonPrimitiveNormal(i, n))
    normals = np.round(normals).astype(int)

    if det2(normals[0], normals[-1]) == 0:
        violations.append(ParallelUnboundedEdges())
    for i in range(d - 1):
        det = det2(normals[i], normals[i + 1])
        if det != -1:
            violations.append(DelzantViolation(i, det))

    if not violations:
        verts = _intersections(normals, lambdas)
        values = verts.dot(normals.T) - lambdas
        for k, v in enumerate(verts):
            others = np.delete(values[k], [k, k + 1])
            if np.any(others <= 1e-12):
                violations.append(FacetOrderViolation("FacetOrderViolation: vertex %d %s is not a vertex of P" % (k + 1, v)))
        for k in range(1, d - 1):
            t = (verts[k] - verts[k - 1]).dot(J.dot(normals[k])) / normals[k].dot(normals[k])
            if t <= 1e-12:
                violations.append(
                    FacetOrderViolation("FacetOrderViolation: facets %d and %d do not share a vertex" % (k, k + 2))
                )
        # the unbounded rays must stay in P
        if np.any(det2(normals[0], normals) > 0) or np.any(det2(normals[-1], normals) < 0):
            violations.append(FacetOrderViolation("FacetOrderViolation: an unbounded edge leaves the polytope"))
        margin, _ = _interior_margin(normals.astype(float), lambdas)
        if margin <= 1e-12:
            violations.append(EmptyInterior("(margin %.3g)" % margin))

    if violations:
        error = violations[0]
        error.violations = violations
        raise error
    return DelzantPolytope(normals, lambdas, name=name)


def make_polytope(normals, lambdas, name=""):
    """Validate a polytope given as separate normal and offset lists."""
    normals = check_array(normals, ensure_2d=True, dtype=None)
    lambdas = check_array(lambdas, ensure_2d=False, dtype=float)
    if normals.shape[0] != lambdas.shape[0]:
        raise SFKValueError("Got %d normals but %d offsets" % (normals.shape[0], lambdas.shape[0]))
    return validate(list(zip(normals, lambdas)), name=name)


def vertices(P):
    """Vertices of P, vertex i being the intersection of facets i and i+1."""
    return _intersections(P.normals, P.lambdas)


def guillemin_facet_values(P, x):
    """Facet functions l_i(x) = x . nu_i - lambda_i (last axis indexes facets)."""
    x = np.asarray(x, dtype=float)
    return x.dot(P.normals.T) - P.lambdas


def is_interior(P, x):
    return bool(np.all(guillemin_facet_values(P, x) > 0))


def edges(P):
    """Edges of P in boundary order.

    Edge k lies on facet k and is traversed in direction J nu_k. Edges 1
    and d are unbounded rays; the others join vertex k-1 and vertex k.

    Returns
    -------
    list of Bunch with index, normal, direction, start, end (None for a ray
    end), bounded, euclidean_length and lattice_length (inf for rays).
    """
    verts = vertices(P)
    d = P.n_facets
    result = []
    for k in range(d):
        nu = P.normals[k]
        direction = J.dot(nu)
        if k == 0:
            start, end, t = None, verts[0], np.inf
        elif k == d - 1:
            start, end, t = verts[-1], None, np.inf
        else:
            start, end = verts[k - 1], verts[k]
            t = (end - start).dot(direction) / nu.dot(nu)
        result.append(
            Bunch(
                index=k,
                normal=nu,
                direction=direction,
                start=start,
                end=end,
                bounded=0 < k < d - 1,
                lattice_length=t,
                euclidean_length=t * np.linalg.norm(nu),
            )
        )
    return result


def anchor_spacings(P):
    """Anchor parameters h_1 = 0 < h_2 < ... < h_{d-1} in the half-plane.

    Facet k occupies the H-interval between consecutive anchors, so the
    spacing h_k - h_{k-1} equals the lattice length of the bounded edge
    on facet k (its Euclidean length divided by |nu_k|).

    Returns
    -------
    a : ndarray, shape (d-1,)
        The AnchorSequence; read-only, a[0] = 0.
    """
    lengths = [e.lattice_length for e in edges(P) if e.bounded]
    a = np.concatenate(([0.0], np.cumsum(lengths)))
    a.setflags(write=False)
    return a


def printed_anchor_spacings(P):
    """Spacings length(e_k) / (2 pi |nu_{k-1}|^2) for comparison in reports."""
    spacings = []
    for e in edges(P):
        if e.bounded:
            prev = P.normals[e.index - 1]
            spacings.append(e.euclidean_length / (2 * np.pi * prev.dot(prev)))
    return np.array(spacings)


def recession_cone(P):
    """Directions of the two unbounded edges, pointing away from the vertices."""
    return -J.dot(P.normals[0]), J.dot(P.normals[-1])


def interior_point(P):
    """A point at distance min(1, inradius) from every facet line."""
    margin, x = _interior_margin(P.normals.astype(float), P.lambdas)
    if margin <= 0:
        raise EmptyInterior()
    return x


def distance_to_boundary(P, x):
    """Euclidean distance from x to the closest facet line."""
    values = guillemin_facet_values(P, x)
    return np.min(values / np.linalg.norm(P.normals, axis=1), axis=-1)


def normalize(P):
    """Move P to standard form at vertex 1.

    Returns a Bunch with the normalised polytope, the SL(2, Z) matrix M and
    the shift v such that x' = M (x - v); afterwards nu_1 = (0, 1),
    nu_2 = (1, 0) and vertex 1 is the origin.
    """
    v = vertices(P)[0]
    N = np.column_stack((P.normals[0], P.normals[1])).astype(float)
    S = np.array([[0.0, 1.0], [1.0, 0.0]])
    M = S.dot(N.T)
    # normals transform by the inverse transpose
    A = S.dot(np.linalg.inv(N))
    normals = np.round(P.normals.dot(A.T)).astype(int)
    lambdas = P.lambdas - P.normals.dot(v)
    return Bunch(polytope=validate(list(zip(normals, lambdas)), name=P.name), matrix=np.round(M).astype(int), shift=v)


def polytope_from_dict(data):
    """Build a polytope from the JSON schema {name, normals, lambdas}."""
    unknown = sorted(set(data) - set(_POLYTOPE_KEYS))
    if unknown:
        raise UnknownPolytopeKey("Unknown polytope keys %s. Allowed keys are %s" % (unknown, list(_POLYTOPE_KEYS)))
    missing = [k for k in ("normals", "lambdas") if k not in data]
    if missing:
        raise SFKValueError("Polytope file misses keys %s" % missing)
    return make_polytope(data["normals"], data["lambdas"], name=data.get("name", ""))


def read_polytope(filename):
    """Read a polytope spec file."""
    with open(filename) as f:
        try:
            data = json.load(f)
        except ValueError as e:
            raise SFKValueError("Malformed polytope file %s: %s" % (filename, e))
    if not isinstance(data, dict):
        raise SFKValueError("Polytope file %s must contain a JSON object" % filename)
    return polytope_from_dict(data)


def write_polytope(P, filename):
    with open(filename, "w") as f:
        json.dump(P.to_dict(), f, sort_keys=True, indent=2)
