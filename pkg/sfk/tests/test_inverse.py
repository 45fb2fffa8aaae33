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

"""Test inverse module."""
import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_almost_equal

from sfk import inverse
from sfk.correspondence import MetricChart, d_xi, hessian_u, moment_map_exact
from sfk.datasets import load_polytope
from sfk.exceptions import BoundaryEvaluation, SFKValueError, SingularHessian
from sfk.harmonic import make_pair


def _flat_grid(lo=0.5, hi=2.5, n=41):
    x1 = x2 = np.linspace(lo, hi, n)
    X1, X2 = np.meshgrid(x1, x2)
    values = 0.5 * (X1 * np.log(X1) - X1 + X2 * np.log(X2) - X2)
    return inverse.GridSampler(x1, x2, values)


def test_guillemin_potential():
    """Test guillemin_potential function."""
    u, gradient, hessian = inverse.guillemin_potential(load_polytope("quadrant"), [1, 1])
    assert_allclose(u, -1)
    assert_allclose(gradient, [0, 0])
    assert_allclose(hessian, np.diag([0.5, 0.5]))

    _, _, hessian = inverse.guillemin_potential(load_polytope("blowup"), [1, 1])
    assert_allclose(hessian, [[1, 0.5], [0.5, 1]])

    with pytest.raises(BoundaryEvaluation):
        inverse.guillemin_potential(load_polytope("quadrant"), [0, 1])


def test_guillemin_third_derivatives():
    """Test the closed-form third derivatives against differences."""
    sampler = inverse.GuilleminSampler(load_polytope("blowup"))
    T = sampler.third_derivatives([1.0, 1.5])
    T_fd = inverse.PotentialSampler.third_derivatives(sampler, [1.0, 1.5])
    assert_allclose(T, T_fd, rtol=1e-7, atol=1e-9)
    assert_allclose(T, np.transpose(T, (2, 1, 0)))


def test_inverse_hessian():
    """Test PotentialSampler.inverse_hessian."""
    sampler = inverse.GuilleminSampler(load_polytope("blowup"))
    assert_allclose(sampler.inverse_hessian([1, 1]).dot(sampler.hessian([1, 1])), np.eye(2), atol=1e-14)

    class Saddle(inverse.PotentialSampler):
        def hessian(self, x):
            return np.diag([1.0, -1.0])

    with pytest.raises(SingularHessian):
        Saddle().inverse_hessian([0, 0])
    with pytest.raises(SFKValueError):
        Saddle().distance([0, 0])


def test_guillemin_scalar_curvature():
    """Test scalar curvature of Guillemin potentials."""
    assert abs(inverse.GuilleminSampler(load_polytope("quadrant")).scalar_curvature([1, 1])) <= 1e-8
    s = inverse.sampler_scalar_curvature(inverse.GuilleminSampler(load_polytope("blowup")), [1, 1])
    assert_allclose(s, 14.0 / 27.0, rtol=1e-6)


def test_isothermal_coordinates_flat():
    """Test the reverse construction on the flat potential."""
    sampler = inverse.GuilleminSampler(load_polytope("quadrant"))
    res = inverse.isothermal_coordinates(sampler, [1, 1], base_x=[1, 1])
    assert_allclose([res.H, res.r], [0, 2])

    res = inverse.isothermal_coordinates(sampler, [2, 0.5], base_x=[1, 1])
    assert_allclose(res.H, -1.5, atol=1e-8)
    assert_allclose(res.r, 2, atol=1e-12)
    assert abs(res.closedness_residual) <= 1e-9

    res = inverse.isothermal_coordinates(sampler, [2, 0.5], base_x=[1, 1], base_H=1.0)
    assert_allclose(res.H, -0.5, atol=1e-8)


def test_h_form_flat():
    """Test that dH = dx_2 - dx_1 for the flat potential."""
    sampler = inverse.GuilleminSampler(load_polytope("quadrant"))
    for x in ([1, 1], [0.3, 2.0], [4.0, 0.7]):
        assert_allclose(sampler.h_form(x), [-1, 1], atol=1e-12)


def test_closedness_detects_curvature():
    """Test that dH fails to be closed for the blow-up Guillemin potential."""
    sampler = inverse.GuilleminSampler(load_polytope("blowup"))
    res = inverse.isothermal_coordinates(sampler, [1, 1], base_x=[2, 2])
    assert abs(res.closedness_residual) > 1e-3


def test_conformal_factor_check():
    """Test conformal_factor_check function."""
    sampler = inverse.GuilleminSampler(load_polytope("quadrant"))
    assert inverse.conformal_factor_check(sampler, [1, 1], base_x=[2, 2]) <= 1e-6
    sampler = inverse.GuilleminSampler(load_polytope("blowup"))
    assert inverse.conformal_factor_check(sampler, [1, 1], base_x=[2, 2]) > 1e-3


def test_pair_sampler_roundtrip():
    """Test that the reverse construction recovers the half-plane point."""
    P = load_polytope("blowup")
    pair = make_pair(P, (-0.5, 0.5))
    sampler = inverse.PairSampler(pair, P)
    assert_allclose(sampler.base_point, moment_map_exact(pair, 0.0, 1.0))
    p = np.array([0.5, 1.2])
    x = moment_map_exact(pair, p[0], p[1])
    assert_allclose(sampler.locate(x), p, atol=1e-10)

    res = inverse.isothermal_coordinates(sampler, x)
    assert_allclose([res.H, res.r], p, atol=1e-7)
    assert abs(res.closedness_residual) <= 1e-8
    assert inverse.conformal_factor_check(sampler, x) <= 1e-5


def test_pair_sampler_third_derivatives():
    """Test the chain-rule third derivatives of PairSampler."""
    P = load_polytope("blowup")
    sampler = inverse.PairSampler(make_pair(P), P)
    x = np.array([1.0, 1.0])
    T = sampler.third_derivatives(x)
    T_fd = inverse.PotentialSampler.third_derivatives(sampler, x)
    assert_allclose(T, T_fd, rtol=1e-5, atol=1e-7)


def test_u_minus_uP():
    """Test u_minus_uP and u_minus_model."""
    P = load_polytope("quadrant")
    guillemin = inverse.GuilleminSampler(P)
    assert_allclose(inverse.u_minus_uP(guillemin, [1, 2]), 0)
    sampler = inverse.PairSampler(make_pair(P), P)
    assert_allclose(inverse.u_minus_uP(sampler, [1, 1]), np.log(2) + 0.5, atol=1e-8)
    assert_allclose(inverse.u_minus_model(sampler, guillemin, [1, 1]), np.log(2) + 0.5, atol=1e-8)


def test_grid_sampler():
    """Test GridSampler on a tabulated flat potential."""
    sampler = _flat_grid()
    assert sampler.nodes().shape == (41 * 41, 2)
    assert_allclose(sampler.base_point, [1.5, 1.5])
    assert_allclose(sampler.hessian([1.5, 1.0]), np.diag([1 / 3.0, 0.5]), rtol=1e-5, atol=1e-8)
    assert not sampler.contains([0.4, 1.0])
    with pytest.raises(BoundaryEvaluation):
        sampler.evaluate([3.0, 1.0])

    res = inverse.isothermal_coordinates(sampler, [1.5, 1.0], tol=1e-8)
    assert_allclose(res.H, -0.5, atol=1e-3)
    assert_allclose(res.r, 2 * np.sqrt(1.5), rtol=1e-4)
    assert abs(res.closedness_residual) <= 1e-3

    with pytest.raises(SFKValueError):
        inverse.GridSampler([0, 1], [0, 1, 2], np.zeros((2, 2)))


def test_potential_grid_io(tmp_path):
    """Test write_potential_grid and read_potential_grid."""
    P = load_polytope("quadrant")
    x1 = np.linspace(0.5, 2.5, 21)
    x2 = np.linspace(0.5, 2.0, 16)
    filename = str(tmp_path / "u.csv")
    inverse.write_potential_grid(inverse.GuilleminSampler(P), x1, x2, filename)
    sampler = inverse.read_potential_grid(filename, polytope=P)
    assert sampler.values.shape == (16, 21)
    assert_allclose(sampler.x1, x1)
    assert_allclose(sampler.potential([1.5, 1.0]), inverse.GuilleminSampler(P).potential([1.5, 1.0]), atol=1e-6)

    with open(filename, "w") as f:
        f.write("a,b,u\n0,0,1\n")
    with pytest.raises(SFKValueError):
        inverse.read_potential_grid(filename)
    with open(filename, "w") as f:
        f.write("x1,x2,u\n0,0,1\n1,0,1\n0,1,1\n")
    with pytest.raises(SFKValueError):
        inverse.read_potential_grid(filename)


def test_invert_grid():
    """Test invert_grid on a tabulated flat potential."""
    sampler = _flat_grid(0.5, 1.7, 13)
    frame = inverse.invert_grid(sampler, tol=1e-8)
    assert list(frame.columns) == ["x1", "x2", "H", "r", "closedness_residual"]
    assert frame.shape[0] == 11 * 11
    inner = frame[(frame.x1 > 0.75) & (frame.x1 < 1.45) & (frame.x2 > 0.75) & (frame.x2 < 1.45)]
    assert inner.shape[0] > 0
    assert_allclose(inner.H, inner.x2 - inner.x1, atol=2e-3)
    assert_allclose(inner.r, 2 * np.sqrt(inner.x1 * inner.x2), rtol=1e-3)


def test_chart_sampler():
    """Test the reverse construction on an interpolated chart."""
    pair = make_pair(load_polytope("quadrant"))
    H = np.linspace(-0.5, 1.0, 31)
    r = np.linspace(0.7, 1.3, 25)
    HH, rr = np.meshgrid(H, r)
    points = np.column_stack((HH.ravel(), rr.ravel()))
    chart = MetricChart(
        H,
        r,
        moment_map_exact(pair, points[:, 0], points[:, 1]),
        np.zeros(len(points)),
        [hessian_u(pair, p) for p in points],
        [d_xi(pair, p).V for p in points],
        np.full(len(points), np.nan),
    )
    sampler = inverse.ChartSampler(chart)
    node = np.argmin(np.linalg.norm(chart.points - [0.5, 1.0], axis=1))
    base = np.argmin(np.linalg.norm(chart.points - [0.0, 1.0], axis=1))
    assert_array_almost_equal(chart.points[node], [0.5, 1.0])
    assert_allclose(sampler.locate(chart.x[node]), chart.points[node], atol=1e-9)
    assert_allclose(sampler.hessian(chart.x[node]), chart.hess[node], atol=1e-9)

    res = inverse.isothermal_coordinates(sampler, chart.x[node], base_x=chart.x[base], tol=1e-9)
    assert_allclose(res.r, 1.0, atol=1e-6)
    assert_allclose(res.H, 0.5, atol=1e-4)
    assert not sampler.contains([10.0, 10.0])
