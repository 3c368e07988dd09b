import math

import numpy as np
import pytest

from layerpeel.evenness import beta_for_alpha
from layerpeel.generators import (
    check_edge_lengths,
    check_outside_in,
    check_ring_counts,
    check_ring_nesting,
    expected_onion_layers,
    gen_collinear,
    gen_convex_position,
    gen_grid,
    gen_onion,
    gen_uniform_ball,
    grid_side,
    midpoint_polygon,
    onion_constant,
    onion_min_n,
    onion_sandwich,
    strictly_inside_convex,
)
from layerpeel.geom import GeometryError, min_pairwise_distance_scan
from layerpeel.peeling import peel


def test_collinear():
    X = gen_collinear(5)
    assert np.all(X.points[:, 1] == 0)
    assert X.points[0, 0] == -0.9 and X.points[-1, 0] == 0.9
    assert len(gen_collinear(1)) == 1
    with pytest.raises(ValueError):
        gen_collinear(0)


def test_convex_position():
    X = gen_convex_position(12)
    assert np.allclose(np.hypot(X.points[:, 0], X.points[:, 1]), 1.0)
    with pytest.raises(ValueError):
        gen_convex_position(2)


class TestUniformBall:
    def test_reproducible(self):
        a = gen_uniform_ball(3, 500, 7)
        b = gen_uniform_ball(3, 500, 7)
        assert np.array_equal(a.points, b.points)
        assert not np.array_equal(a.points, gen_uniform_ball(3, 500, 8).points)

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_inside_ball(self, d):
        X = gen_uniform_ball(d, 2000, 1)
        assert np.all(np.linalg.norm(X.points, axis=1) <= 1.0)

    def test_radial_distribution(self):
        # P(|x| <= r) = r^d for the uniform ball
        X = gen_uniform_ball(2, 20000, 3)
        r = np.linalg.norm(X.points, axis=1)
        for q in (0.25, 0.5, 0.75):
            assert abs(np.mean(r <= q) - q**2) < 0.015

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            gen_uniform_ball(1, 10, 0)
        with pytest.raises(ValueError):
            gen_uniform_ball(2, 0, 0)


class TestGrid:
    @pytest.mark.parametrize("d,n,g", [(2, 9, 3), (2, 10, 4), (3, 27, 3), (3, 28, 4), (2, 1, 1), (2, 2**16, 256)])
    def test_side(self, d, n, g):
        assert grid_side(d, n) == g

    def test_exact_lattice(self):
        X = gen_grid(2, 100)
        p = X.points
        s = np.unique(p[:, 0])
        steps = np.diff(s)
        assert np.all(steps == steps[0])
        assert np.max(np.linalg.norm(p, axis=1)) <= 1.0

    def test_single_point(self):
        assert gen_grid(3, 1).points.tolist() == [[0.0, 0.0, 0.0]]


class TestOnion:
    @pytest.fixture(scope="class")
    @classmethod
    def onion(cls):
        return gen_onion(2**16, 4.0)

    def test_params(self, onion):
        X, p = onion
        beta = beta_for_alpha(2, 4.0)
        assert p.beta == beta
        assert p.C == onion_constant(beta) == max(2 * beta, 4 * math.pi**2)
        assert p.M == math.floor(math.sqrt(2**16) / p.C)
        assert p.k == 16
        assert sum(p.ring_count) == len(X)
        assert set(p.to_json_dict()) == {"n", "alpha", "beta", "C", "M", "k", "ring_edge_length", "ring_count"}

    def test_spacing_exact(self, onion):
        X, p = onion
        assert min_pairwise_distance_scan(X) >= p.beta / math.sqrt(p.n)

    def test_ring_structure(self, onion):
        X, p = onion
        assert check_ring_nesting(X, p) == []
        assert check_ring_counts(p) == []
        assert check_edge_lengths(p) == []
        lo, hi = onion_sandwich(p)
        assert lo <= len(X) <= hi

    def test_ring_radii(self, onion):
        X, p = onion
        for j, sl in enumerate(p.ring_slices(), start=1):
            r = np.linalg.norm(X.points[sl.start : sl.start + p.k], axis=1)
            assert np.all(r <= p.ring_radius(j))
            assert np.all(r > p.ring_radius(j) * (1 - 1e-9))

    def test_peeling_order(self, onion):
        X, p = onion
        a = peel(X)
        assert check_outside_in(a.layer_of, p)
        assert a.layer_count == expected_onion_layers(p)

    def test_too_small(self):
        n0 = onion_min_n(4.0)
        with pytest.raises(GeometryError, match=f"n >= {n0}"):
            gen_onion(n0 - 1, 4.0)
        X, p = gen_onion(n0, 4.0)
        assert p.M == 1

    def test_small_constant_breaks_nesting(self):
        # P_(j-1) fits inside the midpoint polygon of P_j iff j - 1 < j cos^2(pi/k),
        # so with too many rings for k the outer ones stop nesting
        X, p = gen_onion(4096, 4.0, C=8.0)
        assert p.C == 8.0 and p.M == 8 and p.k == 8
        want = [j for j in range(2, p.M + 1) if j - 1 >= j * math.cos(math.pi / p.k) ** 2]
        assert want == [7, 8]
        assert check_ring_nesting(X, p) == want

    def test_short_inner_edges_detected(self):
        # with alpha = 2, ring 1's edges drop below beta/sqrt(n) once 2 C sin(pi/k) < beta
        p_beta = beta_for_alpha(2, 2.0)
        C = onion_constant(p_beta)
        k = next(k for k in range(3, 200) if 2 * C * math.sin(math.pi / k) < p_beta)
        assert k == 33
        ok_n, bad_n = 32**4, 33**4
        X, p = gen_onion(ok_n, 2.0)
        assert min_pairwise_distance_scan(X) >= p.min_spacing
        with pytest.raises(GeometryError, match="spacing violated"):
            gen_onion(bad_n, 2.0)
        X, p = gen_onion(bad_n, 2.0, check_spacing=False)
        assert p.ring_edge_length[0] < p.min_spacing
        assert min_pairwise_distance_scan(X) < p.min_spacing

    def test_deterministic(self):
        a, _ = gen_onion(10000, 2.0)
        b, _ = gen_onion(10000, 2.0)
        assert np.array_equal(a.points, b.points)


def test_midpoint_polygon_and_containment():
    sq = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], float) * 0.5
    mid = midpoint_polygon(sq)
    assert np.allclose(mid[0], [0.25, 0.25])
    inside = strictly_inside_convex(mid, np.array([[0.0, 0.0], [0.25, 0.25], [0.125, 0.125], [0.3, 0.3]]))
    assert inside.tolist() == [True, False, True, False]
    with pytest.raises(GeometryError):
        midpoint_polygon(sq[:2])


def test_outside_in_detects_interleaving():
    from layerpeel.generators import OnionParams

    p = OnionParams(n=1, alpha=2, beta=1, C=1, M=2, k=1, ring_edge_length=(1, 1), ring_count=(2, 2))
    assert check_outside_in(np.array([3, 4, 1, 2]), p)
    assert not check_outside_in(np.array([2, 4, 1, 2]), p)
