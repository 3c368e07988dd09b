"""Size sweeps and log-log exponent fits for the layer number."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields

import numpy as np

from . import generators
from .geom import PointSet
from .peeling import layer_number

FAMILIES = ("collinear", "convex", "uniform_ball", "grid", "onion")
DETERMINISTIC = frozenset({"collinear", "convex", "grid", "onion"})


@dataclass(frozen=True)
class ExperimentRecord:
    family: str
    d: int
    n_param: int
    actual_size: int
    layer_number: int
    seed: int
    wall_time_ms: int


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float
    point_count: int

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "point_count": self.point_count,
        }


def make_point_set(family: str, d: int, n: int, seed: int, params: dict | None = None) -> PointSet:
    params = params or {}
    if family == "collinear":
        return generators.gen_collinear(n)
    if family == "convex":
        return generators.gen_convex_position(n)
    if family == "uniform_ball":
        return generators.gen_uniform_ball(d, n, seed)
    if family == "grid":
        return generators.gen_grid(d, n)
    if family == "onion":
        X, _ = generators.gen_onion(n, params.get("alpha", 4.0), params.get("C"))
        return X
    raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def _one(family, d, n, seed, params, timed) -> ExperimentRecord:
    X = make_point_set(family, d, n, seed, params)
    t0 = time.perf_counter()
    L = layer_number(X)
    ms = int(round((time.perf_counter() - t0) * 1000)) if timed else 0
    return ExperimentRecord(family, X.dim, int(n), len(X), int(L), int(seed), ms)


def run_sweep(
    family: str,
    d: int,
    n_list,
    seeds,
    params: dict | None = None,
    threads: int = 1,
    timed: bool = False,
) -> list[ExperimentRecord]:
    """Peel one generated set per (n, seed); rows come back ordered by (n, seed).

    ``timed=False`` zeroes wall_time_ms so repeated runs are byte-identical.
    """
    n_list = [int(n) for n in n_list]
    seeds = [int(s) for s in seeds]
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if not n_list or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be nonempty and strictly increasing")
    if not seeds:
        raise ValueError("seeds must be nonempty")
    if family in DETERMINISTIC:
        seeds = seeds[:1]
    jobs = [(n, s) for n in n_list for s in seeds]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda job: _one(family, d, job[0], job[1], params, timed), jobs))
    else:
        rows = [_one(family, d, n, s, params, timed) for n, s in jobs]
    return sorted(rows, key=lambda r: (r.n_param, seeds.index(r.seed)))


def _size_means(records) -> tuple[np.ndarray, np.ndarray]:
    groups: dict[int, list[ExperimentRecord]] = {}
    for r in records:
        groups.setdefault(r.n_param, []).append(r)
    sizes = []
    layers = []
    for n in sorted(groups):
        rs = groups[n]
        if any(r.layer_number < 1 for r in rs):
            raise ValueError("layer numbers must be positive")
        sizes.append(np.mean([r.actual_size for r in rs]))
        layers.append(np.mean([r.layer_number for r in rs]))
    return np.asarray(sizes, float), np.asarray(layers, float)


def fit_power_law(sizes, layers) -> ExponentFit:
    """Ordinary least squares of log(layers) on log(sizes)."""
    x = np.log(np.asarray(sizes, float))
    y = np.log(np.asarray(layers, float))
    if np.unique(x).size < 2:
        raise ValueError("need at least two distinct sizes to fit an exponent")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    sxy = float(np.sum((x - xm) * (y - ym)))
    syy = float(np.sum((y - ym) ** 2))
    slope = sxy / sxx
    intercept = float(ym - slope * xm)
    if syy == 0.0:
        r2 = 1.0
    else:
        resid = y - (intercept + slope * x)
        r2 = min(1.0, max(0.0, 1.0 - float(np.sum(resid**2)) / syy))
    return ExponentFit(slope=float(slope), intercept=intercept, r_squared=r2, point_count=int(x.size))


def fit_exponent(records) -> ExponentFit:
    """Fit log L against log |X| after averaging seeds at each requested size."""
    sizes, layers = _size_means(records)
    return fit_power_law(sizes, layers)


def check_claim(fit: ExponentFit, target_slope: float, tolerance: float) -> bool:
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    return abs(fit.slope - target_slope) <= tolerance


CSV_HEADER = [f.name for f in fields(ExperimentRecord)]


def records_to_csv(records) -> str:
    buf = io.StringIO()
    buf.write("# format=1\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(astuple(r))
    return buf.getvalue()


def records_from_csv(text: str) -> list[ExperimentRecord]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.DictReader(lines)
    out = []
    for row in reader:
        out.append(
            ExperimentRecord(
                family=row["family"],
                d=int(row["d"]),
                n_param=int(row["n_param"]),
                actual_size=int(row["actual_size"]),
                layer_number=int(row["layer_number"]),
                seed=int(row["seed"]),
                wall_time_ms=int(row["wall_time_ms"]),
            )
        )
    return out


def fit_to_json(fit: ExponentFit) -> str:
    return json.dumps(fit.to_dict(), indent=2)


def loglog_table(records) -> str:
    """Whitespace table of log sizes and mean layer numbers, ready for gnuplot."""
    sizes, layers = _size_means(records)
    lines = ["# format=1", "# log_size log_layers size mean_layers"]
    for s, l in zip(sizes, layers):
        lines.append(f"{math.log(s):.10f} {math.log(l):.10f} {s:.6g} {l:.6g}")
    return "\n".join(lines) + "\n"


def powers_of_two(lo: int, hi: int) -> list[int]:
    return [2**e for e in range(lo, hi + 1)]
