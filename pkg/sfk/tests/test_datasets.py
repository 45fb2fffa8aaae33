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

"""Test datasets module."""
import pytest
from numpy.testing import assert_allclose

from sfk.datasets import POLYTOPES, load_polytope, make_hirzebruch_like, resolve_polytope
from sfk.polytope import anchor_spacings, write_polytope


def test_load_polytope():
    """Test load_polytope function."""
    for name in POLYTOPES:
        P = load_polytope(name)
        assert P.name == name
    with pytest.raises(ValueError):
        load_polytope("octagon")


def test_make_hirzebruch_like():
    """Test make_hirzebruch_like function."""
    assert make_hirzebruch_like(1) == load_polytope("blowup")
    P = make_hirzebruch_like(2, length=2.0)
    assert P.n_facets == 3
    assert_allclose(anchor_spacings(P), [0, 2])
    with pytest.raises(ValueError):
        make_hirzebruch_like(0)


def test_resolve_polytope(tmp_path):
    """Test resolve_polytope function."""
    assert resolve_polytope("blowup") == load_polytope("blowup")
    filename = str(tmp_path / "q.json")
    write_polytope(load_polytope("quadrant"), filename)
    assert resolve_polytope(filename) == load_polytope("quadrant")
