"""Point-set families: degenerate examples, random balls, grids and the onion.

The onion is M concentric regular k-gons whose boundaries carry points spaced
at least beta/sqrt(n) apart. Rings are peeled strictly from the outside in
and each one takes about half its per-edge point count in steps, which drives
the layer number up to order |X|^(3/4).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .evenness import beta_for_alpha
from .geom import GeometryError, PointSet, min_pairwise_distance

# Onion vertices are snapped to integer multiples of ONION_UNIT * (segments per edge),
# which makes every edge point an exact float and every edge exactly straight.
ONION_UNIT = 2.0**-40
# Relative safety margin so that snapping can never push a spacing below beta/sqrt(n).
ONION_SPACING_MARGIN = 1e-7
GRID_SCALE_BITS = 30


def gen_collinear(n: int) -> PointSet:
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        xs = np.zeros(1)
    else:
        xs = -0.9 + 1.8 * np.arange(n) / (n - 1)
    return PointSet(np.column_stack([xs, np.zeros(n)]), label=f"collinear n={n}")


def gen_convex_position(n: int) -> PointSet:
    if n < 3:
        raise ValueError("a convex polygon needs n >= 3")
    t = 2.0 * np.pi * np.arange(n) / n
    return PointSet(np.column_stack([np.cos(t), np.sin(t)]), label=f"convex n={n}")


def gen_uniform_ball(d: int, n: int, seed: int) -> PointSet:
    """n independent uniform points in the closed unit d-ball (Gaussian direction, U^(1/d) radius)."""
    if d < 2:
        raise ValueError("d must be at least 2")
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    pts = _sample_ball(rng, d, n)
    while True:
        # duplicates are astronomically rare; redraw any that occur
        order = np.lexsort(pts.T[::-1])
        s = pts[order]
        dup = np.flatnonzero(np.all(s[1:] == s[:-1], axis=1))
        if dup.size == 0:
            break
        pts[order[dup + 1]] = _sample_ball(rng, d, dup.size)
    return PointSet(pts, label=f"uniform_ball d={d} n={n} seed={seed}")


def _sample_ball(rng: np.random.Generator, d: int, n: int) -> np.ndarray:
    g = rng.standard_normal((n, d))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms == 0):
        bad = norms == 0
        g[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=1)
    r = rng.random(n) ** (1.0 / d)
    return g / norms[:, None] * r[:, None]


def grid_side(d: int, n: int) -> int:
    """ceil(n^(1/d)) in integer arithmetic."""
    g = max(1, int(round(n ** (1.0 / d))))
    while g**d < n:
        g += 1
    while g > 1 and (g - 1) ** d >= n:
        g -= 1
    return g


def gen_grid(d: int, n: int) -> PointSet:
    """The ceil(n^(1/d))^d cube lattice, centered and scaled into the unit ball.

    The scale is rounded down to GRID_SCALE_BITS significant bits so every
    coordinate is an exact multiple of it; lattice collinearities then hold
    exactly in floating point. Corners sit within 2^-30 (relative) of the sphere.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    if n < 1:
        raise ValueError("n must be positive")
    g = grid_side(d, n)
    if g == 1:
        return PointSet(np.zeros((1, d)), label=f"grid d={d} n={n}")
    s = 1.0 / ((g - 1) * math.sqrt(d))
    mant, exp = math.frexp(s)
    s = math.ldexp(math.floor(math.ldexp(mant, GRID_SCALE_BITS)), exp - GRID_SCALE_BITS)
    offsets = (2 * np.arange(g) - (g - 1)).astype(np.float64) * (s / 2.0)
    mesh = np.meshgrid(*([offsets] * d), indexing="ij")
    pts = np.column_stack([m.ravel() for m in mesh])
    return PointSet(pts, label=f"grid d={d} n={n}")


# --------------------------------------------------------------------------
# onion construction
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OnionParams:
    n: int
    alpha: float
    beta: float
    C: float
    M: int
    k: int
    ring_edge_length: tuple[float, ...]
    ring_count: tuple[int, ...]

    @property
    def min_spacing(self) -> float:
        return self.beta / math.sqrt(self.n)

    def ring_radius(self, j: int) -> float:
        return j * self.C / math.sqrt(self.n)

    def ring_slices(self) -> list[slice]:
        """Slices of the point array holding Q_1, ..., Q_M (vertices first in each)."""
        out = []
        start = 0
        for c in self.ring_count:
            out.append(slice(start, start + c))
            start += c
        return out

    def ring_of_points(self) -> np.ndarray:
        return np.repeat(np.arange(1, self.M + 1), self.ring_count)

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["ring_edge_length"] = list(self.ring_edge_length)
        d["ring_count"] = list(self.ring_count)
        return d


def onion_constant(beta: float) -> float:
    return max(2.0 * beta, 4.0 * math.pi**2)


def onion_min_n(alpha: float, C: float | None = None) -> int:
    """Smallest n with at least one ring."""
    beta = beta_for_alpha(2, alpha)
    C = onion_constant(beta) if C is None else C
    n = max(1, int(math.floor(C * C)))
    while math.floor(math.sqrt(n) / C) < 1:
        n += 1
    return n


def gen_onion(
    n: int, alpha: float, C: float | None = None, check_spacing: bool = True
) -> tuple[PointSet, OnionParams]:
    """Nested regular k-gons with boundary points spaced at least beta/sqrt(n).

    ``C`` overrides the default max(2 beta, 4 pi^2); leave it alone unless
    exploring constants.

    The vertices of P_1 are always placed, so once 2 C sin(pi/k) < beta the
    innermost edges are shorter than the target spacing. That is detected
    after generation and raises GeometryError; pass ``check_spacing=False``
    to get the set anyway (for diagnostics).
    """
    beta = beta_for_alpha(2, alpha)
    C = onion_constant(beta) if C is None else float(C)
    root_n = math.sqrt(n)
    M = int(math.floor(root_n / C))
    if M < 1:
        raise GeometryError(f"onion needs n >= {onion_min_n(alpha, C)} for alpha={alpha} (got n={n})")
    k = math.isqrt(math.isqrt(n))
    if k < 3:
        raise GeometryError(f"onion needs k = floor(n^(1/4)) >= 3 (got n={n})")
    spacing = beta / root_n
    angles = 2.0 * np.pi * np.arange(k) / k
    unit_ring = np.column_stack([np.cos(angles), np.sin(angles)])
    edge_len = []
    counts = []
    blocks = []
    for j in range(1, M + 1):
        radius = j * C / root_n
        length = 2.0 * radius * math.sin(math.pi / k)
        segments = int(math.floor(length * (1.0 - ONION_SPACING_MARGIN) / spacing))
        q = max(segments, 1)
        step = q  # vertex grid step, in ONION_UNIT
        # snap toward the origin so no vertex leaves the unit disk
        vint = np.trunc(radius * unit_ring / (ONION_UNIT * step)).astype(np.int64) * step
        pts_int = [vint]
        if q > 1:
            nxt = np.roll(vint, -1, axis=0)
            delta = (nxt - vint) // q
            for t in range(1, q):
                pts_int.append(vint + t * delta)
        ring = np.concatenate(pts_int).astype(np.float64) * ONION_UNIT
        edge_len.append(length)
        counts.append(len(ring))
        blocks.append(ring)
    X = PointSet(np.concatenate(blocks), label=f"onion n={n} alpha={alpha}")
    params = OnionParams(
        n=int(n),
        alpha=float(alpha),
        beta=beta,
        C=C,
        M=M,
        k=k,
        ring_edge_length=tuple(edge_len),
        ring_count=tuple(counts),
    )
    if check_spacing and len(X) >= 2:
        delta_x = min_pairwise_distance(X)
        if delta_x < spacing:
            raise GeometryError(
                f"onion spacing violated: min distance {delta_x:.6g} < beta/sqrt(n) = {spacing:.6g}"
                f" (innermost edge length {edge_len[0]:.6g})"
            )
    return X, params


def onion_ring_vertices(X: PointSet, params: OnionParams, j: int) -> np.ndarray:
    """The k vertices of P_j in counter-clockwise order (1-based ring index)."""
    sl = params.ring_slices()[j - 1]
    return np.asarray(X.points[sl.start : sl.start + params.k])


def midpoint_polygon(vertices) -> np.ndarray:
    """Polygon through the midpoints of consecutive edges."""
    v = np.asarray(vertices, dtype=np.float64)
    if v.ndim != 2 or v.shape[0] < 3:
        raise GeometryError("a polygon needs at least 3 vertices")
    return (v + np.roll(v, -1, axis=0)) / 2.0


def strictly_inside_convex(polygon, points) -> np.ndarray:
    """Exact strict containment of each point in a counter-clockwise convex polygon."""
    poly = np.ascontiguousarray(polygon, dtype=np.float64)
    q = np.ascontiguousarray(points, dtype=np.float64)
    return _kernels.strictly_inside_convex(poly[:, 0].copy(), poly[:, 1].copy(), q[:, 0].copy(), q[:, 1].copy())


def check_ring_nesting(X: PointSet, params: OnionParams) -> list[int]:
    """Rings j >= 2 whose inner polygon P_(j-1) is NOT strictly inside the midpoint polygon of P_j."""
    bad = []
    for j in range(2, params.M + 1):
        mid = midpoint_polygon(onion_ring_vertices(X, params, j))
        inner = onion_ring_vertices(X, params, j - 1)
        if not np.all(strictly_inside_convex(mid, inner)):
            bad.append(j)
    return bad


def check_ring_counts(params: OnionParams) -> list[int]:
    """Rings whose size falls outside j/(2 beta) <= |Q_j| <= 4 C pi j / beta."""
    b, C = params.beta, params.C
    return [
        j
        for j, c in enumerate(params.ring_count, start=1)
        if not (j / (2.0 * b) <= c <= 4.0 * C * math.pi * j / b)
    ]


def check_edge_lengths(params: OnionParams) -> list[int]:
    """Rings whose nominal edge length leaves [j n^(-3/4), 4 C pi j n^(-3/4))."""
    s = params.n ** -0.75
    return [
        j
        for j, l in enumerate(params.ring_edge_length, start=1)
        if not (j * s <= l < 4.0 * params.C * math.pi * j * s)
    ]


def check_outside_in(layer_of: np.ndarray, params: OnionParams) -> bool:
    """Every point of ring j is peeled before any point of ring j - 1."""
    slices = params.ring_slices()
    for j in range(2, params.M + 1):
        outer = layer_of[slices[j - 1]]
        inner = layer_of[slices[j - 2]]
        if outer.max() >= inner.min():
            return False
    return True


def onion_sandwich(params: OnionParams) -> tuple[float, float]:
    """Bounds (1/2beta) M(M+1)/2 and (4 C pi / beta) M(M+1)/2 on |X|."""
    t = params.M * (params.M + 1) / 2.0
    return t / (2.0 * params.beta), 4.0 * params.C * math.pi * t / params.beta


def expected_onion_layers(params: OnionParams) -> int:
    """Layer number implied by the construction: per ring, one step for the
    vertices plus ceil(m/2) for m interior points per edge."""
    total = 0
    for c in params.ring_count:
        m = c // params.k - 1
        total += 1 + (m + 1) // 2
    return total
