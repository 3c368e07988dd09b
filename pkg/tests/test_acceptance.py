"""Acceptance suite: one test per criterion, each at its stated tolerance and
time budget. A PASS/FAIL line per criterion is printed in the terminal summary
(and directly when this file is run as a script)."""

import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import cKDTree

from layerpeel.evenness import (
    CERTIFIED,
    REFUTED,
    beta_for_alpha,
    certify_min_distance,
    exact_ball_bound,
    exact_ball_count,
    f_d,
    probe_evenness,
)
from layerpeel.experiments import check_claim, fit_exponent, powers_of_two, run_sweep
from layerpeel.generators import (
    check_outside_in,
    check_ring_counts,
    check_ring_nesting,
    gen_collinear,
    gen_convex_position,
    gen_grid,
    gen_onion,
    gen_uniform_ball,
)
from layerpeel.geom import PointSet, min_pairwise_distance, point_set
from layerpeel.oracle import extreme_points_oracle
from layerpeel.peeling import cap_diagnostic, extreme_points, layer_number, peel, peel_step

from conftest import random_set

RESULTS: dict[int, str] = {}
SEEDS = [11, 22, 33, 44, 55]


def _record(num: int, title: str, ok: bool, detail: str, elapsed: float, budget: float) -> None:
    in_time = elapsed < budget
    verdict = "PASS" if ok and in_time else "FAIL"
    timing = f"{elapsed:.1f}s/{budget:g}s" + ("" if in_time else " OVER BUDGET")
    line = f"{verdict} criterion {num:2d} ({title}): {detail} [{timing}]"
    RESULTS[num] = line
    print(line)
    assert ok, line
    assert in_time, line


def test_c01_collinear_exact():
    t0 = time.perf_counter()
    bad = [n for n in range(1, 61) if layer_number(gen_collinear(n)) != math.ceil(n / 2)]
    _record(1, "collinear L = ceil(n/2)", not bad, f"n=1..60, mismatches={bad}", time.perf_counter() - t0, 1)


def test_c02_convex_position():
    t0 = time.perf_counter()
    got = {n: layer_number(gen_convex_position(n)) for n in (3, 10, 10**3, 10**5)}
    ok = all(v == 1 for v in got.values())
    _record(2, "convex position L = 1", ok, f"L by n: {got}", time.perf_counter() - t0, 5)


def _square_with_midpoints():
    return point_set([(-0.5, -0.5), (0, -0.5), (0.5, -0.5), (0.5, 0), (0.5, 0.5), (0, 0.5), (-0.5, 0.5), (-0.5, 0)])


def _degenerate_fixtures():
    yield gen_grid(2, 9)
    yield gen_grid(2, 49)
    yield gen_grid(3, 27)
    yield gen_grid(3, 8)
    yield gen_collinear(40)
    yield PointSet(np.column_stack([np.linspace(-0.5, 0.5, 20), np.linspace(-0.3, 0.3, 20), np.linspace(0.1, -0.4, 20)]))
    yield _square_with_midpoints()
    cube = [(x, y, z) for x in (-0.5, 0, 0.5) for y in (-0.5, 0, 0.5) for z in (-0.5, 0, 0.5)]
    yield point_set(cube)
    # coplanar 3d set: a planar grid lifted into z = 0.2
    yield point_set([(x / 8, y / 8, 0.2) for x in range(-3, 4) for y in range(-3, 4)])


def test_c03_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    mismatches = 0
    checked = 0
    for i in range(200):
        d = 2 if i % 2 == 0 else 3
        n = int(rng.integers(1, 41))
        lattice = [None, 4, 6][i % 3]
        X = random_set(rng, n, d, lattice)
        checked += 1
        mismatches += extreme_points(X) != extreme_points_oracle(X)
    for X in _degenerate_fixtures():
        cur = X
        while len(cur):  # every peeling step, not only the first
            checked += 1
            mismatches += extreme_points(cur) != extreme_points_oracle(cur)
            cur = peel_step(cur)
    _record(3, "engine = exact oracle", mismatches == 0, f"{checked} sets, mismatches={mismatches}",
            time.perf_counter() - t0, 60)


def test_c04_monotone_under_subsets():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    violations = 0
    for i in range(500):
        d = 2 if i % 2 == 0 else 3
        lattice = None if i % 4 < 2 else (12 if d == 2 else 4)
        n = int(rng.integers(1, 301 if lattice is None or d == 2 else 61))
        X = random_set(rng, n, d, lattice)
        keep = rng.random(n) < rng.uniform(0.2, 0.95)
        if not keep.any():
            keep[int(rng.integers(n))] = True
        Y = X.subset(keep)
        step_ok = set(peel_step(Y).ids.tolist()) <= set(peel_step(X).ids.tolist())
        if not step_ok or layer_number(Y) > layer_number(X):
            violations += 1
    _record(4, "Y subset of X: peel_step and L monotone", violations == 0, f"500 trials, violations={violations}",
            time.perf_counter() - t0, 60)


def test_c05_cap_diagnostic():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    failures = []
    for i in range(100):
        n = int(rng.integers(1, 2001))
        X = gen_uniform_ball(2, n, int(rng.integers(2**32))) if i % 2 else random_set(rng, min(n, 150), 2, 12)
        for r in (0.3, 0.5, 0.7):
            if not cap_diagnostic(X, r).bound_holds:
                failures.append((i, r))
    _record(5, "cap bound L <= max cap + L(inner)", not failures, f"300 cases, failures={failures}",
            time.perf_counter() - t0, 120)


def _delta_at_least_exact(X: PointSet, spacing: float) -> bool:
    """delta(X) >= spacing checked in rationals on every near-minimal pair."""
    pts = np.asarray(X.points)
    delta = min_pairwise_distance(X)
    if delta < spacing * (1 - 1e-9):
        return False
    pairs = cKDTree(pts).query_pairs(max(delta, spacing) * (1 + 1e-9), output_type="ndarray")
    s2 = Fraction(spacing) ** 2
    for i, j in pairs:
        d2 = sum((Fraction(float(a)) - Fraction(float(b))) ** 2 for a, b in zip(pts[i], pts[j]))
        if d2 < s2:
            return False
    return True


def test_c06_onion_construction():
    t0 = time.perf_counter()
    problems = []
    for alpha in (2.0, 4.0):
        for e in (18, 20, 22):
            X, p = gen_onion(2**e, alpha, check_spacing=False)
            if not _delta_at_least_exact(X, p.beta / math.sqrt(p.n)):
                problems.append((alpha, e, "spacing"))
            if check_ring_nesting(X, p):
                problems.append((alpha, e, "nesting"))
            if check_ring_counts(p):
                problems.append((alpha, e, "ring counts"))
            if not check_outside_in(peel(X).layer_of, p):
                problems.append((alpha, e, "outside-in"))
    _record(6, "onion spacing/nesting/ring sizes/outside-in", not problems,
            f"alpha in {{2,4}}, n in 2^{{18,20,22}}, problems={problems}", time.perf_counter() - t0, 300)


def _slope_criterion(num, title, records, lo, hi, budget, t0, min_r2=None):
    fit = fit_exponent(records)
    mid, half = (lo + hi) / 2, (hi - lo) / 2
    ok = check_claim(fit, mid, half) and (min_r2 is None or fit.r_squared >= min_r2)
    want = f"[{lo}, {hi}]" + (f", r2 >= {min_r2}" if min_r2 else "")
    _record(num, title, ok, f"slope={fit.slope:.4f} r2={fit.r_squared:.5f} want {want}",
            time.perf_counter() - t0, budget)


@pytest.mark.slow
def test_c07_onion_exponent():
    t0 = time.perf_counter()
    recs = run_sweep("onion", 2, powers_of_two(18, 23), [0], params={"alpha": 4.0})
    _slope_criterion(7, "onion exponent", recs, 0.70, 0.80, 900, t0, min_r2=0.99)


@pytest.mark.slow
def test_c08_uniform_planar_exponent():
    t0 = time.perf_counter()
    recs = run_sweep("uniform_ball", 2, powers_of_two(10, 17), SEEDS)
    _slope_criterion(8, "uniform disk exponent", recs, 0.60, 0.72, 600, t0)


@pytest.mark.slow
def test_c09_grid_exponent():
    t0 = time.perf_counter()
    recs = run_sweep("grid", 2, powers_of_two(10, 16), [0])
    _slope_criterion(9, "square grid exponent", recs, 0.60, 0.72, 600, t0)


@pytest.mark.slow
def test_c10_uniform_3d_exponent():
    t0 = time.perf_counter()
    recs = run_sweep("uniform_ball", 3, [250, 500, 1000, 2000, 4000], SEEDS)
    _slope_criterion(10, "uniform 3-ball exponent", recs, 0.45, 0.68, 900, t0)


def test_c11_f_beta_roundtrip():
    t0 = time.perf_counter()
    worst = 0.0
    monotone = True
    for d in range(1, 6):
        for alpha in (1.01, 2.0, 4.0, 100.0):
            worst = max(worst, abs(f_d(d, beta_for_alpha(d, alpha)) - alpha) / alpha)
        vals = [f_d(d, b) for b in np.geomspace(1e-3, 1e3, 100)]
        monotone &= all(a > b for a, b in zip(vals, vals[1:]))
    ok = worst <= 1e-9 and monotone
    _record(11, "f_d / beta round trip", ok, f"max rel err={worst:.2e}, strictly decreasing={monotone}",
            time.perf_counter() - t0, 1)


def _planted_cluster(seed: int, d: int) -> PointSet:
    rng = np.random.default_rng(seed)
    centre = rng.uniform(-0.3, 0.3, d)
    cluster = centre + 1e-6 * rng.uniform(-0.5, 0.5, (50, d))
    return PointSet(np.vstack([cluster, gen_uniform_ball(d, 300, seed).points]))


def test_c12_evenness_soundness():
    t0 = time.perf_counter()
    not_certified = []
    refuted = []
    for alpha in (2.0, 4.0):
        for e in (18, 20):
            X, _ = gen_onion(2**e, alpha)
            if certify_min_distance(X, alpha).verdict != CERTIFIED:
                not_certified.append((alpha, e))
            if probe_evenness(X, alpha, 10**4, e).verdict == REFUTED:
                refuted.append((alpha, e))
    bad_witness = []
    for seed in range(6):
        Y = _planted_cluster(seed, 2 + seed % 2)
        rep = probe_evenness(Y, 2.0, 10**4, seed)
        w = rep.witness
        if rep.verdict != REFUTED or not (
            exact_ball_count(Y, w.center, w.radius) == w.count > exact_ball_bound(2.0, len(Y), Y.dim, w.radius)
        ):
            bad_witness.append(seed)
    ok = not (not_certified or refuted or bad_witness)
    detail = (f"onion not certified={not_certified}, onion refuted by probes={refuted}, "
              f"cluster fixtures without valid witness={bad_witness}")
    _record(12, "evenness certificate and refuter", ok, detail, time.perf_counter() - t0, 120)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
