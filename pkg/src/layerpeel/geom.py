"""Point sets, distances, ball volumes and the exact planar orientation predicate."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

BALL_SLACK = 1e-12
FORMAT_VERSION = 1

# Expansion arithmetic stays exact as long as products neither underflow nor overflow.
_SAFE_LO = 2.0**-450
_SAFE_HI = 2.0**450


class GeometryError(ValueError):
    """Invalid geometric input (dimension mismatch, duplicates, outside the ball...)."""


class PointSetFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Orientation(enum.IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PointSet:
    """An immutable, duplicate-free set of points in the closed unit ball.

    ``ids`` holds each point's index in the original set, so subsets produced
    by peeling can be mapped back.
    """

    points: np.ndarray
    label: str = ""
    ids: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim == 1 and pts.size == 0:
            raise GeometryError("empty point set needs an explicit dimension; use PointSet.empty(dim)")
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise GeometryError(f"points must be an (n, d) array with d >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise GeometryError("coordinates must be finite")
        sq = np.einsum("ij,ij->i", pts, pts)
        bad = np.flatnonzero(sq > (1.0 + BALL_SLACK) ** 2)
        if bad.size:
            raise GeometryError(f"point {bad[0]} lies outside the unit ball (norm {math.sqrt(sq[bad[0]]):.17g})")
        dup = _first_duplicate(pts)
        if dup is not None:
            raise GeometryError(f"duplicate points at indices {dup[0]} and {dup[1]}")
        if self.ids is None:
            ids = np.arange(len(pts), dtype=np.int64)
        else:
            ids = np.array(self.ids, dtype=np.int64, copy=True)
            if ids.shape != (len(pts),):
                raise GeometryError("ids must have one entry per point")
        object.__setattr__(self, "points", _freeze(pts))
        object.__setattr__(self, "ids", _freeze(ids))

    @classmethod
    def empty(cls, dim: int, label: str = "") -> PointSet:
        return cls(np.zeros((0, dim)), label=label)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def subset(self, indices, label: str | None = None) -> PointSet:
        """Points at the given positions, in the order given, keeping ids."""
        idx = np.asarray(indices)
        idx = np.flatnonzero(idx) if idx.dtype == bool else idx.astype(np.int64)
        return PointSet(self.points[idx], label=self.label if label is None else label, ids=self.ids[idx])

    def as_tuples(self) -> list[tuple[float, ...]]:
        return [tuple(float(c) for c in p) for p in self.points]

    def __repr__(self) -> str:
        return f"PointSet(n={len(self)}, dim={self.dim}, label={self.label!r})"


def _first_duplicate(pts: np.ndarray):
    if len(pts) < 2:
        return None
    order = np.lexsort(pts.T[::-1])
    s = pts[order]
    same = np.all(s[1:] == s[:-1], axis=1)
    hit = np.flatnonzero(same)
    if hit.size == 0:
        return None
    a, b = sorted((int(order[hit[0]]), int(order[hit[0] + 1])))
    return a, b


def _as_vec(p) -> np.ndarray:
    v = np.asarray(p, dtype=np.float64)
    if v.ndim != 1:
        raise GeometryError("a point must be a 1-d coordinate sequence")
    return v


def squared_distance(p, q) -> float:
    a, b = _as_vec(p), _as_vec(q)
    if a.shape != b.shape:
        raise GeometryError(f"dimension mismatch: {a.size} vs {b.size}")
    s = 0.0
    for x, y in zip(a.tolist(), b.tolist()):
        t = x - y
        s += t * t
    return s


def min_pairwise_distance(X: PointSet | np.ndarray) -> float:
    """Smallest distance between two distinct points.

    Sweeps along the widest axis and stops each row once the axis gap alone
    exceeds the best distance, which returns exactly what a full scan would.
    """
    pts = X.points if isinstance(X, PointSet) else np.ascontiguousarray(X, dtype=np.float64)
    if len(pts) < 2:
        raise GeometryError("minimum distance needs at least two points")
    axis = int(np.argmax(pts.max(axis=0) - pts.min(axis=0)))
    order = np.argsort(pts[:, axis], kind="stable")
    return math.sqrt(_kernels.min_sq_distance_sweep(np.ascontiguousarray(pts), order, axis))


def min_pairwise_distance_scan(X: PointSet | np.ndarray) -> float:
    """O(n^2) reference for :func:`min_pairwise_distance`."""
    pts = X.points if isinstance(X, PointSet) else np.ascontiguousarray(X, dtype=np.float64)
    if len(pts) < 2:
        raise GeometryError("minimum distance needs at least two points")
    return math.sqrt(_kernels.min_sq_distance_scan(np.ascontiguousarray(pts)))


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d, pi^(d/2) / Gamma(d/2 + 1)."""
    if int(d) != d or d < 1:
        raise GeometryError(f"dimension must be a positive integer, got {d}")
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def expansion_safe(coords: np.ndarray) -> bool:
    """True when the float expansion predicates are exact for these coordinates."""
    a = np.abs(np.asarray(coords, dtype=np.float64))
    nz = a[a != 0.0]
    return bool(nz.size == 0 or (nz.min() >= _SAFE_LO and nz.max() <= _SAFE_HI))


def orient2d_fraction(p, q, r) -> int:
    px, py = (Fraction(float(c)) for c in p)
    qx, qy = (Fraction(float(c)) for c in q)
    rx, ry = (Fraction(float(c)) for c in r)
    det = (qx - px) * (ry - py) - (qy - py) * (rx - px)
    return (det > 0) - (det < 0)


def orientation(p, q, r) -> Orientation:
    """Exact sign of det[q - p, r - p] for 2-d points."""
    a, b, c = _as_vec(p), _as_vec(q), _as_vec(r)
    if not (a.size == b.size == c.size == 2):
        raise GeometryError("orientation is defined for 2-d points only")
    coords = np.concatenate([a, b, c])
    if not np.all(np.isfinite(coords)):
        raise GeometryError("coordinates must be finite")
    if expansion_safe(coords):
        s = _kernels.orient2d(a[0], a[1], b[0], b[1], c[0], c[1])
    else:
        s = orient2d_fraction(a, b, c)
    return Orientation(int(s))


# --------------------------------------------------------------------------
# text format
# --------------------------------------------------------------------------

_HEADER = re.compile(r"^#\s*dim=(\d+)\s+label=(.*)$")


def format_point_set(X: PointSet) -> str:
    lines = [f"# dim={X.dim} label={X.label}", f"# format={FORMAT_VERSION}"]
    lines.extend(",".join(format(float(c), ".17g") for c in p) for p in X.points)
    return "\n".join(lines) + "\n"


def write_point_set(X: PointSet, path) -> None:
    Path(path).write_text(format_point_set(X), encoding="utf-8")


def parse_point_set(text: str) -> PointSet:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise PointSetFormatError(1, "empty input; expected '# dim=<d> label=<string>' header")
    m = _HEADER.match(lines[0].strip())
    if not m:
        raise PointSetFormatError(1, "expected '# dim=<d> label=<string>' header")
    dim = int(m.group(1))
    label = m.group(2).strip()
    if dim < 1:
        raise PointSetFormatError(1, "dim must be positive")
    rows: list[list[float]] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != dim:
            raise PointSetFormatError(lineno, f"expected {dim} coordinates, found {len(parts)}")
        try:
            row = [float(t) for t in parts]
        except ValueError:
            raise PointSetFormatError(lineno, f"not a number in {line!r}") from None
        if not all(math.isfinite(v) for v in row):
            raise PointSetFormatError(lineno, "coordinates must be finite")
        rows.append(row)
    if not rows:
        raise PointSetFormatError(len(lines), "no points")
    try:
        return PointSet(np.array(rows, dtype=np.float64), label=label)
    except GeometryError as exc:
        raise PointSetFormatError(len(lines), str(exc)) from None


def read_point_set(path) -> PointSet:
    return parse_point_set(Path(path).read_text(encoding="utf-8"))


def point_set(points: Iterable[Sequence[float]], label: str = "") -> PointSet:
    """Convenience constructor from any nested sequence."""
    return PointSet(np.asarray(list(points), dtype=np.float64), label=label)
