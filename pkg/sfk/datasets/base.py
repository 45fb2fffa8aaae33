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

"""Named polytopes shipped with sfk."""
import os

from sfk.polytope import make_polytope, read_polytope

POLYTOPES = ("quadrant", "blowup", "three_facet", "a2_chain")


def load_polytope(name):
    """Load a named polytope.

    Parameters
    ----------
    name : str
        One of 'quadrant' (C^2), 'blowup' (C^2 blown up at the origin),
        'three_facet' and 'a2_chain' (four facets).
    """
    if name not in POLYTOPES:
        raise ValueError("Unknown polytope %s. Choices are: %s" % (name, list(POLYTOPES)))
    return read_polytope(os.path.join(os.path.dirname(__file__), "polytopes", "%s.json" % name))


def make_hirzebruch_like(k=1, length=1.0):
    """Three facets with normals (0, 1), (1, k), (1, k - 1).

    The bounded edge has lattice length ``length``; k = 1 is the blow-up.
    """
    if k < 1:
        raise ValueError("k must be a positive integer, got %s" % k)
    return make_polytope([(0, 1), (1, k), (1, k - 1)], [0.0, length, 0.0], name="hirzebruch_like_%d" % k)


def resolve_polytope(spec):
    """A polytope from a dataset name or a path to a JSON spec file."""
    if spec in POLYTOPES:
        return load_polytope(spec)
    return read_polytope(spec)
