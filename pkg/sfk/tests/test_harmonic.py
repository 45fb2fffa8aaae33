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

"""Test harmonic module."""
import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_almost_equal

from sfk import harmonic
from sfk.datasets import load_polytope
from sfk.exceptions import InadmissibleParameter, NumericalUnderflow, SFKValueError
from sfk.numerics import fd_derivative, fd_partial

POINTS = [(0.3, 0.7), (-1.2, 0.4), (2.5, 1.5), (0.5, 0.05)]


def test_log_jump_partials_small_r():
    """Test that log(H - h + rho) keeps its precision near the axis."""
    d = harmonic.log_jump_partials(-1.0, 1e-8, order=0)
    assert_allclose(d[0, 0], 2 * np.log(1e-8) - np.log(2), rtol=1e-12)
    d = harmonic.log_jump_partials(1.0, 1e-8, order=0)
    assert_allclose(d[0, 0], np.log(2), rtol=1e-12)
    with pytest.raises(NumericalUnderflow):
        harmonic.log_jump_partials(-1.0, 1e-200)


def test_partials_against_fd():
    """Test every closed-form partial up to order 3 against differences of the one below it."""
    for nu in (None, (-0.5, 0.5)):
        pair = harmonic.make_pair(load_polytope("blowup"), nu)
        for H, r in POINTS[:3]:
            d = harmonic.evaluate(pair, (H, r), order=3)
            h = 0.1 * r
            for (i, j), expected in sorted(d.items()):
                if i + j == 0:
                    continue
                if i > 0:
                    res = fd_derivative(lambda t: harmonic.evaluate(pair, (H + t, r), order=2)[i - 1, j], 0.0, h=h)
                else:
                    res = fd_derivative(lambda t: harmonic.evaluate(pair, (H, r + t), order=2)[i, j - 1], 0.0, h=h)
                assert_allclose(res.value, expected, rtol=1e-7, atol=1e-7)


def test_evaluate():
    """Test evaluate on the flat quadrant pair at (0, 1)."""
    pair = harmonic.make_pair(load_polytope("quadrant"))
    d = harmonic.evaluate(pair, (0.0, 1.0), order=1)
    assert sorted(d) == [(0, 0), (0, 1), (1, 0)]
    assert_allclose(d[0, 0], [0, 0], atol=1e-15)
    assert_allclose(d[1, 0], [0.5, -0.5])
    assert_allclose(d[0, 1], [0.5, 0.5])

    d = harmonic.evaluate(pair.replace(linear_coeff=(-0.5, 0.5)), (0.0, 1.0), order=1)
    assert_allclose(d[1, 0], [0, 0], atol=1e-15)


def test_jet():
    """Test jet tensors."""
    pair = harmonic.make_pair(load_polytope("blowup"))
    xi, D1, D2, D3 = pair.jet((0.3, 0.7))
    d = pair.partials(0.3, 0.7)
    assert D1.shape == (2, 2)
    assert D3.shape == (2, 2, 2, 2)
    assert_allclose(D1[:, 1], d[0, 1])
    assert_allclose(D2[:, 0, 1], d[1, 1])
    assert_allclose(D2[:, 1, 0], d[1, 1])
    assert_allclose(D3[:, 0, 1, 1], d[1, 2])
    assert_allclose(D3[:, 1, 0, 0], d[2, 1])
    assert_allclose(pair(0.3, 0.7), xi)


def test_pde_residual():
    """Test that the pairs of every shipped polytope are axisymmetric harmonic."""
    for name in ("quadrant", "blowup", "three_facet", "a2_chain"):
        P = load_polytope(name)
        nu = harmonic.sample_admissible(P, 1, random_state=0)[0]
        for pair in (harmonic.make_pair(P), harmonic.make_pair(P, nu)):
            for p in POINTS:
                d = harmonic.evaluate(pair, p, order=2)
                scale = max(1.0, np.max(np.abs([d[2, 0], d[0, 2], d[0, 1] / p[1]])))
                assert np.max(np.abs(harmonic.pde_residual(pair, p))) <= 1e-12 * scale


def test_pde_residual_fd():
    """Test the harmonic equation by finite differences."""
    pair = harmonic.make_pair(load_polytope("quadrant"))

    def f(p):
        return pair(p[0], p[1])

    p = np.array([1.0, 1.0])
    xi_HH = fd_partial(f, p, (0, 0), h=0.2).value
    xi_rr = fd_partial(f, p, (1, 1), h=0.2).value
    xi_r = fd_partial(f, p, (1,), h=0.2).value
    assert_allclose(xi_HH + xi_rr + xi_r, 0, atol=1e-8)

    bad = pair.replace(polynomial={(2, 0): (1, 0)})
    assert_allclose(harmonic.pde_residual(bad, p), [2, 0], atol=1e-10)


def test_make_pair_quadrant():
    """Test make_pair on the quadrant."""
    pair = harmonic.make_pair(load_polytope("quadrant"))
    assert pair.is_ale
    assert_allclose(pair(0, 2), [0.5 * np.log(2), 0.5 * np.log(2)])
    assert_array_almost_equal(pair.vertex, [0, 0])


def test_facet_log_coeff():
    """Test that the axis behaviour of xi reproduces the facet normals."""
    for name in ("quadrant", "blowup", "a2_chain"):
        P = load_polytope(name)
        pair = harmonic.make_pair(P)
        for k in range(P.n_facets):
            assert_allclose(pair.facet_log_coeff(k), P.normals[k])
        assert_allclose(pair.far_direction, 0.5 * (P.normals[0] + P.normals[-1]))
        assert len(pair.facet_intervals()) == P.n_facets


def test_facet_log_coeff_numeric():
    """Test that xi - nu_k log r stays bounded on facet interval k."""
    P = load_polytope("blowup")
    pair = harmonic.make_pair(P)
    for k, H in enumerate((-1.0, 0.5, 2.0)):
        values = [pair(H, r) - P.normals[k] * np.log(r) for r in (1e-4, 1e-6)]
        assert_allclose(values[0], values[1], atol=1e-6)


def test_pair_errors():
    """Test the errors of AxiHarmonicPair."""
    pair = harmonic.make_pair(load_polytope("blowup"))
    with pytest.raises(SFKValueError):
        pair.partials(0.0, 0.0)
    with pytest.raises(SFKValueError):
        pair.partials(0.0, -1.0)
    with pytest.raises(SFKValueError):
        harmonic.AxiHarmonicPair((1, 0), [(0, 1)], anchors=[0, 1])
    with pytest.raises(SFKValueError):
        harmonic.AxiHarmonicPair((1, 0), [(0, 1), (1, 0)], anchors=[1, 0])
    with pytest.raises(ValueError):
        pair.partials(0.0, 1.0, order=4)
    with pytest.raises(ValueError):
        pair.anchors[0] = 3.0


def test_replace():
    """Test AxiHarmonicPair.replace."""
    pair = harmonic.make_pair(load_polytope("blowup"))
    other = pair.replace(linear_coeff=(-0.5, 0.5))
    assert pair.is_ale
    assert not other.is_ale
    assert_allclose(other.nu, [-0.5, 0.5])
    assert_allclose(other.vertex, pair.vertex)
    assert_allclose(other(0.5, 1.0) - pair(0.5, 1.0), [-0.25, 0.25])


def test_taub_nut_parameter():
    """Test TaubNutParameter.parse."""
    assert harmonic.TaubNutParameter.parse("ale").is_ale
    assert harmonic.TaubNutParameter.parse("ALE").is_ale
    assert harmonic.TaubNutParameter.parse(None).is_ale
    nu = harmonic.TaubNutParameter.parse("0.5,-0.5")
    assert_allclose(nu.nu, [0.5, -0.5])
    assert not nu.is_ale
    assert harmonic.TaubNutParameter.parse(nu) is nu
    assert_allclose(harmonic.TaubNutParameter.parse((1, 2)).nu, [1, 2])
    for text in ("x", "1,2,3", "nan,1"):
        with pytest.raises(SFKValueError):
            harmonic.TaubNutParameter.parse(text)


def test_is_admissible():
    """Test is_admissible function."""
    P = load_polytope("quadrant")
    assert harmonic.is_admissible(P, (-1, 1))
    assert harmonic.is_admissible(P, (0, 0))
    assert not harmonic.is_admissible(P, (1, -1))
    assert not harmonic.is_admissible(P, (0.5, -0.5))
    assert not harmonic.is_admissible(P, (0, 1))
    assert not harmonic.is_admissible(P, (-1, 0.01), margin=0.2)

    P = load_polytope("blowup")
    assert harmonic.is_admissible(P, harmonic.TaubNutParameter((-0.5, 0.5)))


def test_make_pair_inadmissible():
    """Test that make_pair rejects parameters outside the cone."""
    P = load_polytope("quadrant")
    with pytest.raises(InadmissibleParameter):
        harmonic.make_pair(P, "0.5,-0.5")
    pair = harmonic.make_pair(P, "0.5,-0.5", check_admissible=False)
    assert_allclose(pair.nu, [0.5, -0.5])


def test_sample_admissible():
    """Test sample_admissible function."""
    for name in ("quadrant", "blowup", "three_facet", "a2_chain"):
        P = load_polytope(name)
        samples = harmonic.sample_admissible(P, 5, random_state=0)
        assert samples.shape == (5, 2)
        assert all(harmonic.is_admissible(P, nu, margin=0.2) for nu in samples)
        assert_allclose(samples, harmonic.sample_admissible(P, 5, random_state=0))
