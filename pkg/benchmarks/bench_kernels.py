"""Numba kernels vs the pure-Python fallback.

Each mode runs in its own interpreter because the JIT switch is read at
import time. Compilation is excluded (one warm-up call per workload).

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]
"""

import argparse
import json
import os
import subprocess
import sys
import textwrap

WORKER = textwrap.dedent(
    """
    import json, sys, time
    import numpy as np
    from layerpeel import JIT_ENABLED
    from layerpeel.generators import gen_grid, gen_uniform_ball
    from layerpeel.geom import min_pairwise_distance
    from layerpeel.peeling import extreme_points, peel

    quick = sys.argv[1] == "1"
    repeat = int(sys.argv[2])
    n2 = 2000 if quick else 20000
    n3 = 150 if quick else 400
    grid = gen_grid(2, n2)
    disk = gen_uniform_ball(2, n2, 1)
    ball = gen_uniform_ball(3, n3, 1)
    work = {
        f"peel grid 2d n={len(grid)}": lambda: peel(grid),
        f"peel disk n={n2}": lambda: peel(disk),
        f"extreme points 3d n={n3}": lambda: extreme_points(ball),
        f"min distance n={n2}": lambda: min_pairwise_distance(disk),
    }
    out = {"jit": JIT_ENABLED}
    for name, fn in work.items():
        fn()
        best = float("inf")
        for _ in range(repeat):
            t = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t)
        out[name] = best
    print(json.dumps(out))
    """
)


def run_mode(disable_jit: bool, quick: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("LAYERPEEL_DISABLE_JIT", None)
    if disable_jit:
        env["LAYERPEEL_DISABLE_JIT"] = "1"
    res = subprocess.run(
        [sys.executable, "-c", WORKER, "1" if quick else "0", str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="small sizes (the pure path is slow)")
    args = ap.parse_args()

    jit = run_mode(False, args.quick, args.repeat)
    pure = run_mode(True, args.quick, args.repeat)
    print(f"{'workload':<34}{'numba [s]':>12}{'python [s]':>12}{'speed-up':>10}")
    for key in jit:
        if key == "jit":
            continue
        a, b = jit[key], pure[key]
        print(f"{key:<34}{a:>12.4f}{b:>12.4f}{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
