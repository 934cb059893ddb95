import math

import numpy as np
import pytest

import solidsum as ss

SQRT3 = math.sqrt(3.0)


class TestDiscreteVolume:
    @pytest.mark.parametrize("t", [1.0, 2.0, 3.0])
    def test_square_quasi_polynomial(self, square, t):
        # corner/edge/interior weights give (t-1)^2 + 2(t-1) + 1 = t^2 exactly
        res = ss.discrete_volume(square, t)
        assert res.value == pytest.approx(t * t, abs=1e-12)
        assert res.std_error == 0.0

    def test_triangle_at_one(self, triangle):
        res = ss.discrete_volume(triangle, 1.0, keep_weights=True)
        assert res.value == pytest.approx(11.0 / 12.0, abs=1e-12)
        weights = dict(res.per_point_weights)
        assert weights[(0, 0)] == pytest.approx(0.25, abs=1e-12)
        assert weights[(0, 1)] == pytest.approx(1 / 6, abs=1e-12)
        assert weights[(1, 0)] == pytest.approx(0.5, abs=1e-12)

    def test_triangle_l1_weights(self, triangle):
        # vertex weights from diamond clipping, edge point 1/2
        res = ss.discrete_volume(triangle, 1.0, p=1.0, keep_weights=True)
        v2 = ss.solid_angle_exact_2d_l1(ss.vertex_simple_cones(triangle, 1)[0]).value
        weights = dict(res.per_point_weights)
        assert weights[(0, 0)] == pytest.approx(0.25, abs=1e-12)
        assert weights[(0, 1)] == pytest.approx(v2, abs=1e-12)
        assert weights[(1, 0)] == pytest.approx(0.5, abs=1e-12)
        assert res.value == pytest.approx(0.25 + v2 + 0.5, abs=1e-12)

    def test_per_point_weights_sum_to_value(self, triangle):
        res = ss.discrete_volume(triangle, 1.7, keep_weights=True)
        assert res.value == pytest.approx(sum(w for _, w in res.per_point_weights), abs=1e-12)
        assert all(0.0 <= w <= 1.0 for _, w in res.per_point_weights)

    @pytest.mark.parametrize("p", [1.0, 2.0])
    def test_exact_vs_mc(self, triangle, p):
        exact = ss.discrete_volume(triangle, 1.0, p=p, method="exact2d")
        mc = ss.discrete_volume(triangle, 1.0, p=p, method="mc", n_samples=40_000, seed=3)
        assert abs(exact.value - mc.value) <= 3 * max(mc.std_error, 1e-9)

    def test_monotone_in_t(self):
        # origin interior: angles of existing points never decrease
        P = ss.load_polytope(2, [(-1, -1), (1.5, -1), (1.5, 1), (-1, 1)])
        vals = [ss.discrete_volume(P, t).value for t in (0.5, 1.0, 1.5, 2.0, 2.5)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_exact2d_unsupported_combination(self, tetrahedron, square):
        with pytest.raises(ss.UnsupportedCombination):
            ss.discrete_volume(tetrahedron, 1.0, method="exact2d")
        with pytest.raises(ss.UnsupportedCombination):
            ss.discrete_volume(square, 1.0, p=3.0, method="exact2d")

    def test_tetrahedron_mc(self, tetrahedron):
        # 4 vertex cones; the corner at the origin is the octant (1/8)
        res = ss.discrete_volume(tetrahedron, 1.0, n_samples=40_000, seed=4, keep_weights=True)
        weights = dict(res.per_point_weights)
        assert abs(weights[(0, 0, 0)] - 0.125) <= 0.01
        assert res.n_lattice_points == 4


class TestAlphaOracle:
    def test_phase_collapse_at_zero(self, triangle):
        a = ss.alpha_oracle(triangle, np.zeros(2))
        b = ss.discrete_volume(triangle, 1.0)
        assert a.value == pytest.approx(b.value, abs=1e-12)
        assert abs(a.value.imag) < 1e-15

    def test_triangle_real_s(self, triangle):
        s = np.array([0.17, 0.29])
        got = ss.alpha_oracle(triangle, s)
        want = (0.25 + (1 / 6) * np.exp(2j * math.pi * s[1])
                + 0.5 * np.exp(2j * math.pi * s[0]))
        assert abs(got.value - want) < 1e-12

    def test_empty(self):
        P = ss.load_polytope(2, [(0.2, 0.2), (0.8, 0.2), (0.8, 0.8), (0.2, 0.8)])
        assert ss.alpha_oracle(P, np.array([0.4 + 0.2j, 0.1 + 0j])).value == 0j
