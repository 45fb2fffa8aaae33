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

"""Errors raised across the sfk package.

Input problems derive from ``ValueError`` so that callers can treat them as
bad arguments; failures of the numerical kernels derive from
``RuntimeError``. The command line maps the two families to different exit
codes.
"""


class SFKValueError(ValueError):
    """Invalid input to an sfk routine."""


class NumericalFailure(RuntimeError):
    """A numerical kernel could not meet its tolerance."""


class NonPrimitiveNormal(SFKValueError):
    def __init__(self, index, normal):
        self.index = index
        self.normal = tuple(normal)
        super(NonPrimitiveNormal, self).__init__(
            "NonPrimitiveNormal: normal %d %s is not a primitive integer vector" % (index + 1, self.normal)
        )


class DelzantViolation(SFKValueError):
    def __init__(self, index, det):
        self.index = index
        self.det = det
        super(DelzantViolation, self).__init__(
            "DelzantViolation: det(nu_%d, nu_%d) = %g, expected -1" % (index + 1, index + 2, det)
        )


class ParallelUnboundedEdges(SFKValueError):
    def __init__(self):
        super(ParallelUnboundedEdges, self).__init__(
            "ParallelUnboundedEdges: first and last normals are parallel, " "the polytope is not strictly unbounded"
        )


class EmptyInterior(SFKValueError):
    def __init__(self, detail=""):
        super(EmptyInterior, self).__init__("EmptyInterior: the facet inequalities have no common interior %s" % detail)


class UnknownPolytopeKey(SFKValueError):
    """Polytope file carries keys outside the documented schema."""


class DegenerateIntersection(NumericalFailure):
    """Two consecutive facet lines do not meet in a single point."""


class InadmissibleParameter(SFKValueError):
    def __init__(self, nu, point=None, value=None):
        self.nu = tuple(nu)
        self.point = point
        self.value = value
        if point is None:
            msg = "InadmissibleParameter: nu=%s lies outside the admissible cone" % (self.nu,)
        else:
            msg = "InadmissibleParameter: V <= 0 at (H,r)=(%.6g, %.6g) (V=%.3g) for nu=%s" % (
                point[0],
                point[1],
                value,
                self.nu,
            )
        super(InadmissibleParameter, self).__init__(msg)


class NumericalUnderflow(NumericalFailure):
    """A stabilised logarithm argument underflowed to zero."""


class DegenerateJacobian(NumericalFailure):
    def __init__(self, point, det):
        self.point = point
        self.det = det
        super(DegenerateJacobian, self).__init__(
            "DegenerateJacobian: |det Dxi| = %.3g at (H,r)=(%.6g, %.6g)" % (abs(det), point[0], point[1])
        )


class QuadratureFailure(NumericalFailure):
    """Adaptive quadrature did not reach the requested tolerance."""


class PathLeavesHalfPlane(SFKValueError):
    """An integration path touches r <= 0."""


class NewtonDivergence(NumericalFailure):
    def __init__(self, best, residual, n_iter):
        self.best = best
        self.residual = residual
        self.n_iter = n_iter
        super(NewtonDivergence, self).__init__(
            "NewtonDivergence: residual %.3g after %d iterations, best iterate %s" % (residual, n_iter, best)
        )


class StencilLeavesDomain(NumericalFailure):
    """A finite-difference stencil reaches outside the domain."""


class BoundaryEvaluation(SFKValueError):
    """A potential was evaluated on or outside the polytope boundary."""


class SingularHessian(NumericalFailure):
    """A sampled Hessian is not positive definite."""


class AmbiguousClassification(NumericalFailure):
    """Far-field Hessian samples fit neither the ALE nor a Taub-NUT limit."""


class FacetOrderViolation(SFKValueError):
    """Consecutive facets do not share a vertex, or an unbounded edge leaves P."""
