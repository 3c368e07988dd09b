"""Evenly distributed point sets.

A set X in the unit ball is alpha-evenly distributed when every ball D of
positive volume satisfies |X n D| <= ceil(alpha |X| Vol(D)). Deciding this
over all balls is out of reach, so there are two one-sided tools:

* :func:`certify_min_distance` proves evenness from the minimum distance.
* :func:`probe_evenness` hunts for a ball that breaks the inequality and, if
  it finds one, rechecks it in exact arithmetic before reporting it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np
from scipy.spatial import cKDTree

from .geom import GeometryError, PointSet, min_pairwise_distance, unit_ball_volume
from .seeding import splitmix64

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

MIN_DISTANCE_CERTIFICATE = "min_distance_certificate"
BALL_PROBE = "ball_probe"

PROBE_BATCH = 1024
GUARD = 1e-12


@dataclass(frozen=True)
class BallWitness:
    center: tuple[float, ...]
    radius: float
    count: int
    bound: int

    def to_dict(self) -> dict:
        return {"center": list(self.center), "radius": self.radius, "count": self.count, "bound": self.bound}


@dataclass(frozen=True)
class EvennessReport:
    alpha: float
    method: str
    verdict: str
    witness: Optional[BallWitness] = None
    level: Optional[float] = None  # f_d(beta*) for the certificate

    def to_dict(self) -> dict:
        out = {"alpha": self.alpha, "method": self.method, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.level is not None:
            out["level"] = self.level
        return out


def f_d(d: int, beta: float) -> float:
    """Evenness level guaranteed by min distance >= beta * n^(-1/d)."""
    if beta <= 0 or not math.isfinite(beta):
        raise ValueError(f"beta must be positive and finite, got {beta}")
    c = unit_ball_volume(d)
    return (4.0 * math.sqrt(d) / (c ** (1.0 / d) * beta) + 1.0) ** d


def beta_for_alpha(d: int, alpha: float) -> float:
    """Inverse of :func:`f_d` in beta."""
    if not alpha > 1 or not math.isfinite(alpha):
        raise ValueError(f"alpha must be a finite real > 1, got {alpha}")
    c = unit_ball_volume(d)
    # alpha^(1/d) - 1 loses digits as alpha -> 1; expm1/log1p keep them.
    return 4.0 * math.sqrt(d) / (c ** (1.0 / d) * math.expm1(math.log(alpha) / d))


def certify_min_distance(X: PointSet, alpha: float) -> EvennessReport:
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    n = len(X)
    delta = min_pairwise_distance(X)
    beta_star = delta * n ** (1.0 / X.dim)
    level = f_d(X.dim, beta_star)
    verdict = CERTIFIED if level <= alpha else INCONCLUSIVE
    return EvennessReport(alpha=float(alpha), method=MIN_DISTANCE_CERTIFICATE, verdict=verdict, level=level)


# --------------------------------------------------------------------------
# refutation
# --------------------------------------------------------------------------


def _exact_violation(alpha: float, n: int, d: int, radius: float, count: int) -> bool:
    """count > ceil(alpha n Vol(D))  <=>  alpha n Vol(D) <= count - 1."""
    vol = alpha * n * unit_ball_volume(d) * radius**d
    lhs = count - 1
    if vol < lhs * (1 - GUARD):
        return True
    if vol > lhs * (1 + GUARD):
        return False
    with mpmath.workdps(60):
        v = mpmath.mpf(alpha) * n * mpmath.pi ** (mpmath.mpf(d) / 2) / mpmath.gamma(mpmath.mpf(d) / 2 + 1)
        v *= mpmath.mpf(radius) ** d
        return bool(v <= lhs)


def exact_ball_bound(alpha: float, n: int, d: int, radius: float) -> int:
    """ceil(alpha n Vol(D)) evaluated at 60 digits."""
    with mpmath.workdps(60):
        v = mpmath.mpf(alpha) * n * mpmath.pi ** (mpmath.mpf(d) / 2) / mpmath.gamma(mpmath.mpf(d) / 2 + 1)
        v *= mpmath.mpf(radius) ** d
        return int(mpmath.ceil(v))


def exact_ball_count(X: PointSet, center, radius: float) -> int:
    """|X n D| for the closed ball D, with squared distances in rationals."""
    c = [Fraction(float(v)) for v in center]
    r2 = Fraction(float(radius)) ** 2
    pts = np.asarray(X.points)
    # only points the float test puts near or inside can be in the ball
    d2 = np.einsum("ij,ij->i", pts - np.asarray(center), pts - np.asarray(center))
    cand = np.flatnonzero(d2 <= float(radius) ** 2 * (1 + 1e-9) + 1e-300)
    cnt = 0
    for i in cand:
        s = sum((Fraction(float(v)) - cv) ** 2 for v, cv in zip(pts[i], c))
        if s <= r2:
            cnt += 1
    return cnt


def verify_witness(X: PointSet, alpha: float, w: BallWitness) -> bool:
    """Recount the witness ball exhaustively and recheck the inequality exactly."""
    count = exact_ball_count(X, w.center, w.radius)
    return count == w.count and count > exact_ball_bound(alpha, len(X), X.dim, w.radius)


def _uniform_ball(rng: np.random.Generator, d: int, n: int) -> np.ndarray:
    g = rng.standard_normal((n, d))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0] = 1.0
    r = rng.random(n) ** (1.0 / d)
    return g / norms[:, None] * r[:, None]


def _first_violation(X, tree, alpha, centers, radii) -> Optional[BallWitness]:
    n, d = len(X), X.dim
    counts = tree.query_ball_point(centers, radii, return_length=True)
    vol = alpha * n * unit_ball_volume(d) * radii**d
    # float screen with slack; exact confirmation below
    cand = np.flatnonzero(vol <= (counts - 1) * (1 + 1e-9))
    for i in cand:
        count = exact_ball_count(X, centers[i], float(radii[i]))
        if _exact_violation(alpha, n, d, float(radii[i]), count):
            bound = exact_ball_bound(alpha, n, d, float(radii[i]))
            return BallWitness(tuple(float(v) for v in centers[i]), float(radii[i]), count, bound)
    return None


def _neighbour_ranks(n: int, max_rank: int) -> list[int]:
    ranks = []
    k = 1
    while k <= min(n - 1, max_rank):
        ranks.append(k)
        k *= 2
    return ranks


def probe_evenness(
    X: PointSet,
    alpha: float,
    probes: int,
    seed: int,
    max_rank: int = 256,
) -> EvennessReport:
    """Search for a ball with |X n D| > ceil(alpha |X| Vol(D)).

    Random balls come first (center uniform in the unit ball, radius uniform
    in (0, 1]), in batches of PROBE_BATCH with sub-seeds ``splitmix64(seed, b)``;
    the lowest batch holding a violation wins. Then every point is tried as the
    center of balls reaching its 1st, 2nd, 4th, ... nearest neighbour, up to
    ``max_rank``. A violation is only reported after an exact recount.
    """
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    if probes < 1:
        raise ValueError("probes must be positive")
    pts = np.asarray(X.points)
    n, d = pts.shape
    tree = cKDTree(pts)
    for b, start in enumerate(range(0, probes, PROBE_BATCH)):
        size = min(PROBE_BATCH, probes - start)
        rng = np.random.default_rng(splitmix64(seed, b))
        centers = _uniform_ball(rng, d, size)
        radii = 1.0 - rng.random(size)
        w = _first_violation(X, tree, alpha, centers, radii)
        if w is not None:
            return EvennessReport(alpha=float(alpha), method=BALL_PROBE, verdict=REFUTED, witness=w)
    ranks = _neighbour_ranks(n, max_rank)
    if ranks:
        dist, _ = tree.query(pts, k=[r + 1 for r in ranks])
        dist = np.atleast_2d(dist)
        for col in range(len(ranks)):
            # nudge outward so the rank-th neighbour is inside despite rounding
            radii = np.nextafter(np.nextafter(dist[:, col], np.inf), np.inf)
            w = _first_violation(X, tree, alpha, pts, radii)
            if w is not None:
                return EvennessReport(alpha=float(alpha), method=BALL_PROBE, verdict=REFUTED, witness=w)
    return EvennessReport(alpha=float(alpha), method=BALL_PROBE, verdict=INCONCLUSIVE)


def check_evenness(X: PointSet, alpha: float, probes: int, seed: int, max_rank: int = 256) -> EvennessReport:
    """Certificate first; if it does not apply, probe for a counterexample."""
    if len(X) >= 2:
        rep = certify_min_distance(X, alpha)
        if rep.verdict == CERTIFIED:
            return rep
    return probe_evenness(X, alpha, probes, seed, max_rank=max_rank)
