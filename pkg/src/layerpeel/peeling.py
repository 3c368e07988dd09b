"""Extreme points, the peeling sequence and the layer number.

Two engines:

* d = 2: points are sorted once, then every step is a monotone-chain hull
  with strict turns on the survivors. Orientation is exact, so points in the
  relative interior of a hull edge are never reported as extreme.
* d >= 3: each point is tested on its own (is it in the hull of the others?)
  with a float minimum-norm-point solve. Verdicts with less than ``TOL`` of
  margin go to an exact rational solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .exact import in_hull_exact, in_simplex_exact, to_integer_coords
from .geom import GeometryError, PointSet, expansion_safe, orient2d_fraction

TOL = 1e-9


@dataclass(frozen=True)
class LayerAssignment:
    layer_of: np.ndarray
    layer_count: int
    layer_sizes: tuple[int, ...]

    def layer(self, k: int) -> np.ndarray:
        """Positions of the points removed at step ``k`` (1-based)."""
        return np.flatnonzero(self.layer_of == k)


@dataclass(frozen=True)
class CapDiagnostic:
    inner_radius: float
    max_cap_count: int
    inner_layer_number: int
    layer_number: int
    bound_holds: bool


# --------------------------------------------------------------------------
# planar engine
# --------------------------------------------------------------------------


def _lex_order(pts: np.ndarray) -> np.ndarray:
    return np.lexsort((pts[:, 1], pts[:, 0]))


def _hull_mask_fraction(pts: np.ndarray) -> np.ndarray:
    # Slow path for coordinates where float expansions could underflow.
    order = _lex_order(pts)
    mark = np.zeros(len(pts), bool)
    if len(pts) == 1:
        mark[:] = True
        return mark
    P = [tuple(pts[i]) for i in order]
    for seq in (range(len(P)), range(len(P) - 1, -1, -1)):
        stack: list[int] = []
        for i in seq:
            while len(stack) >= 2 and orient2d_fraction(P[stack[-2]], P[stack[-1]], P[i]) <= 0:
                stack.pop()
            stack.append(i)
        for i in stack:
            mark[order[i]] = True
    return mark


def _extreme_mask_2d(pts: np.ndarray) -> np.ndarray:
    if not expansion_safe(pts):
        return _hull_mask_fraction(pts)
    order = _lex_order(pts)
    s = pts[order]
    ms = _kernels.extreme_mask_sorted_2d(np.ascontiguousarray(s[:, 0]), np.ascontiguousarray(s[:, 1]))
    mask = np.empty(len(pts), bool)
    mask[order] = ms
    return mask


def _peel_2d(pts: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    if not expansion_safe(pts):
        return _peel_generic(pts, _hull_mask_fraction)
    order = _lex_order(pts)
    s = pts[order]
    layer_sorted, sizes = _kernels.peel_sorted_2d(np.ascontiguousarray(s[:, 0]), np.ascontiguousarray(s[:, 1]))
    layer = np.empty(len(pts), np.int64)
    layer[order] = layer_sorted
    return layer, tuple(int(v) for v in sizes)


# --------------------------------------------------------------------------
# d >= 3 engine
# --------------------------------------------------------------------------


def _extreme_mask_nd(pts: np.ndarray, tol: float = TOL) -> np.ndarray:
    m, d = pts.shape
    if m == 1:
        return np.ones(1, bool)
    if expansion_safe(pts):
        status, hints = _kernels.extreme_status_nd(np.ascontiguousarray(pts), tol)
    else:
        status = np.full(m, _kernels.UNDECIDED, np.int8)
        hints = np.full((m, d + 1), -1, np.int64)
    undecided = np.flatnonzero(status == _kernels.UNDECIDED)
    if undecided.size:
        ints = to_integer_coords(pts)
        for q in undecided:
            status[q] = _decide_exact(ints, int(q), hints[q])
    return status == _kernels.EXTREME


def _decide_exact(ints, q: int, hint) -> int:
    support = [ints[i] for i in hint if i >= 0]
    if support:
        inside = in_simplex_exact(ints[q], support)
        if inside:
            return _kernels.NON_EXTREME
    others = ints[:q] + ints[q + 1 :]
    return _kernels.NON_EXTREME if in_hull_exact(ints[q], others) else _kernels.EXTREME


def _extreme_mask_1d(pts: np.ndarray) -> np.ndarray:
    mask = np.zeros(len(pts), bool)
    mask[int(np.argmin(pts[:, 0]))] = True
    mask[int(np.argmax(pts[:, 0]))] = True
    return mask


def _peel_generic(pts: np.ndarray, mask_fn) -> tuple[np.ndarray, tuple[int, ...]]:
    layer = np.zeros(len(pts), np.int64)
    alive = np.arange(len(pts))
    sizes = []
    k = 0
    while alive.size:
        k += 1
        mask = mask_fn(pts[alive])
        layer[alive[mask]] = k
        sizes.append(int(mask.sum()))
        alive = alive[~mask]
    return layer, tuple(sizes)


def _mask_fn(dim: int):
    if dim == 1:
        return _extreme_mask_1d
    if dim == 2:
        return _extreme_mask_2d
    return _extreme_mask_nd


# --------------------------------------------------------------------------
# public API
# --------------------------------------------------------------------------


def extreme_mask(X: PointSet) -> np.ndarray:
    if len(X) == 0:
        raise GeometryError("extreme points of an empty set are undefined")
    return _mask_fn(X.dim)(np.asarray(X.points))


def extreme_points(X: PointSet) -> frozenset[int]:
    """Positions (in ``X``) of the points not in the convex hull of the rest."""
    return frozenset(int(i) for i in np.flatnonzero(extreme_mask(X)))


def peel_step(X: PointSet) -> PointSet:
    """``X`` minus its extreme points, order and ids preserved."""
    return X.subset(~extreme_mask(X))


def peel(X: PointSet) -> LayerAssignment:
    if len(X) == 0:
        raise GeometryError("cannot peel an empty set")
    pts = np.asarray(X.points)
    if X.dim == 2:
        layer, sizes = _peel_2d(pts)
    else:
        layer, sizes = _peel_generic(pts, _mask_fn(X.dim))
    layer.setflags(write=False)
    return LayerAssignment(layer_of=layer, layer_count=len(sizes), layer_sizes=sizes)


def layer_number(X: PointSet) -> int:
    return peel(X).layer_count


def format_layers_csv(assignment: LayerAssignment) -> str:
    lines = ["# format=1", "index,layer"]
    lines.extend(f"{i},{int(k)}" for i, k in enumerate(assignment.layer_of))
    lines.append(f"# L={assignment.layer_count}")
    return "\n".join(lines) + "\n"


def parse_layers_csv(text: str) -> LayerAssignment:
    layer = []
    count = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line == "index,layer":
            continue
        if line.startswith("# L="):
            count = int(line[4:])
            continue
        if line.startswith("#"):
            continue
        i, k = line.split(",")
        if int(i) != len(layer):
            raise ValueError(f"row index {i} out of order")
        layer.append(int(k))
    arr = np.array(layer, dtype=np.int64)
    sizes = tuple(int(v) for v in np.bincount(arr)[1:]) if arr.size else ()
    if count is None:
        count = len(sizes)
    return LayerAssignment(layer_of=arr, layer_count=count, layer_sizes=sizes)


def cap_directions(X: PointSet, inner_radius: float, grid: int | None = None):
    """Candidate cap normals: a uniform angle grid plus, for every point outside
    the inner disk, the two tangent lines of the inner disk through it.

    Returns (ux, uy, forced) where ``forced[k]`` is the point the k-th tangent
    line passes through (-1 for grid directions).
    """
    pts = np.asarray(X.points)
    n = len(pts)
    K = max(4 * n, 64) if grid is None else grid
    theta = 2.0 * np.pi * np.arange(K) / K
    norms = np.hypot(pts[:, 0], pts[:, 1]) if n else np.zeros(0)
    outside = np.flatnonzero(norms > inner_radius)
    phi = np.arctan2(pts[outside, 1], pts[outside, 0])
    half = np.arccos(np.clip(inner_radius / norms[outside], -1.0, 1.0))
    tang = np.concatenate([phi - half, phi + half])
    ang = np.concatenate([theta, tang])
    forced = np.concatenate([np.full(K, -1, np.int64), outside, outside]).astype(np.int64)
    return np.cos(ang), np.sin(ang), forced


def cap_diagnostic(X: PointSet, inner_radius: float, grid: int | None = None) -> CapDiagnostic:
    """Check L(X) <= max cap count + L(X within the inner disk) for concentric disks.

    The outer body is the unit disk, the inner one the disk of radius
    ``inner_radius``. Caps are sampled, so ``max_cap_count`` never exceeds the
    true maximum.
    """
    if not (0.0 < inner_radius < 1.0):
        raise GeometryError(f"inner_radius must lie in (0, 1), got {inner_radius}")
    if X.dim != 2:
        raise GeometryError("cap diagnostic is implemented for planar sets only")
    if len(X) == 0:
        raise GeometryError("cap diagnostic needs a nonempty set")
    pts = np.asarray(X.points)
    ux, uy, forced = cap_directions(X, inner_radius, grid)
    counts = _kernels.cap_counts(
        np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]), ux, uy, float(inner_radius), forced
    )
    max_cap = int(counts.max()) if counts.size else 0
    inner = np.flatnonzero(np.einsum("ij,ij->i", pts, pts) <= inner_radius * inner_radius)
    inner_L = layer_number(X.subset(inner)) if inner.size else 0
    L = layer_number(X)
    return CapDiagnostic(
        inner_radius=float(inner_radius),
        max_cap_count=max_cap,
        inner_layer_number=inner_L,
        layer_number=L,
        bound_holds=L <= max_cap + inner_L,
    )
