"""Command line entry point.

Exit codes: 0 success, 1 invalid input or usage, 2 the analysis ran and the
property under test was refuted (evenness violated, slope claim failed,
engine disagreed with the oracle).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .evenness import REFUTED, check_evenness, probe_evenness
from .experiments import (
    FAMILIES,
    check_claim,
    fit_exponent,
    make_point_set,
    loglog_table,
    records_to_csv,
    run_sweep,
)
from .generators import gen_onion
from .geom import GeometryError, PointSet, PointSetFormatError, format_point_set, parse_point_set
from .oracle import extreme_points_oracle
from .peeling import cap_diagnostic, extreme_points, format_layers_csv, peel, peel_step
from .seeding import sub_seeds

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_REFUTED = 2


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = _Parser(prog="layerpeel", description="Convex-layer peeling toolkit.", formatter_class=fmt)
    p.add_argument("--version", action="version", version=f"layerpeel {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    g = sub.add_parser("generate", help="write a point set", formatter_class=fmt)
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--n", type=int, required=True, help="size parameter")
    g.add_argument("--d", type=int, default=2, help="dimension (uniform_ball, grid)")
    g.add_argument("--seed", type=int, default=0, help="RNG seed (uniform_ball)")
    g.add_argument("--alpha", type=float, default=4.0, help="evenness level (onion)")
    g.add_argument("--C", dest="C", type=float, default=None, help="override the onion ring constant")
    g.add_argument("--output", type=Path, default=None, help="point-set file; stdout when omitted")
    g.add_argument("--params-output", type=Path, default=None, help="onion parameters JSON; <output>.json when omitted")

    pl = sub.add_parser("peel", help="peel a point set, write index,layer CSV", formatter_class=fmt)
    pl.add_argument("--input", type=Path, default=None, help="point-set file; stdin when omitted")
    pl.add_argument("--output", type=Path, default=None, help="CSV file; stdout when omitted")

    c = sub.add_parser("check-even", help="certify or refute alpha-evenness", formatter_class=fmt)
    c.add_argument("--input", type=Path, default=None, help="point-set file; stdin when omitted")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--probes", type=int, default=10000, help="random balls to try")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-rank", type=int, default=256, help="largest nearest-neighbour rank for point-centred balls")
    c.add_argument("--probe-only", action="store_true", help="skip the minimum-distance certificate")
    c.add_argument("--output", type=Path, default=None, help="JSON file; stdout when omitted")

    e = sub.add_parser("experiment", help="sweep sizes and fit the layer-number exponent", formatter_class=fmt)
    e.add_argument("--family", choices=FAMILIES, required=True)
    e.add_argument("--d", type=int, default=2)
    e.add_argument("--n-list", type=_int_list, required=True, help="comma-separated increasing sizes")
    e.add_argument("--seeds", type=_int_list, default=None, help="comma-separated seeds (overrides --seed/--n-seeds)")
    e.add_argument("--seed", type=int, default=0, help="master seed expanded into --n-seeds sub-seeds")
    e.add_argument("--n-seeds", type=int, default=1)
    e.add_argument("--alpha", type=float, default=4.0, help="onion evenness level")
    e.add_argument("--C", dest="C", type=float, default=None, help="override the onion ring constant")
    e.add_argument("--threads", type=int, default=1)
    e.add_argument("--timings", action="store_true", help="record wall_time_ms (output no longer reproducible)")
    e.add_argument("--target-slope", type=float, default=None, help="check the fitted slope against this")
    e.add_argument("--tolerance", type=float, default=0.05)
    e.add_argument("--output", type=Path, default=None, help="records CSV; stdout when omitted")
    e.add_argument("--fit-output", type=Path, default=None, help="fit JSON; stderr when omitted")
    e.add_argument("--loglog", type=Path, default=None, help="optional log-log table")

    o = sub.add_parser("oracle-verify", help="compare the fast engine with the exact oracle", formatter_class=fmt)
    o.add_argument("--input", type=Path, default=None, help="point-set file; stdin when omitted")
    o.add_argument("--all-steps", action="store_true", help="check every peeling step, not just the first")

    k = sub.add_parser("cap-diagnostic", help="cap bound for concentric disks", formatter_class=fmt)
    k.add_argument("--input", type=Path, default=None, help="point-set file; stdin when omitted")
    k.add_argument("--inner-radius", type=float, default=0.5)
    return p


def _read_input(path: Path | None) -> PointSet:
    text = sys.stdin.read() if path is None else path.read_text(encoding="utf-8")
    return parse_point_set(text)


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def _cmd_generate(a) -> int:
    if a.n < 1:
        raise CliError("--n must be positive")
    if a.family == "onion":
        X, params = gen_onion(a.n, a.alpha, a.C)
        side = a.params_output
        if side is None and a.output is not None:
            side = a.output.with_suffix(a.output.suffix + ".json")
        blob = json.dumps(params.to_json_dict(), indent=2) + "\n"
        if side is not None:
            side.write_text(blob, encoding="utf-8")
        else:
            sys.stderr.write(blob)
    else:
        X = make_point_set(a.family, a.d, a.n, a.seed)
    _emit(format_point_set(X), a.output)
    return EXIT_OK


def _cmd_peel(a) -> int:
    X = _read_input(a.input)
    _emit(format_layers_csv(peel(X)), a.output)
    return EXIT_OK


def _cmd_check_even(a) -> int:
    if a.alpha <= 1:
        raise CliError("--alpha must exceed 1")
    if a.probes < 1:
        raise CliError("--probes must be positive")
    X = _read_input(a.input)
    if a.probe_only:
        rep = probe_evenness(X, a.alpha, a.probes, a.seed, max_rank=a.max_rank)
    else:
        rep = check_evenness(X, a.alpha, a.probes, a.seed, max_rank=a.max_rank)
    _emit(json.dumps(rep.to_dict(), indent=2) + "\n", a.output)
    return EXIT_REFUTED if rep.verdict == REFUTED else EXIT_OK


def _cmd_experiment(a) -> int:
    if a.threads < 1:
        raise CliError("--threads must be positive")
    if a.tolerance <= 0:
        raise CliError("--tolerance must be positive")
    seeds = a.seeds if a.seeds else sub_seeds(a.seed, a.n_seeds)
    params = {"alpha": a.alpha, "C": a.C}
    records = run_sweep(a.family, a.d, a.n_list, seeds, params=params, threads=a.threads, timed=a.timings)
    _emit(records_to_csv(records), a.output)
    status = EXIT_OK
    if len({r.n_param for r in records}) >= 2:
        fit = fit_exponent(records)
        payload = fit.to_dict()
        if a.target_slope is not None:
            ok = check_claim(fit, a.target_slope, a.tolerance)
            payload.update(target_slope=a.target_slope, tolerance=a.tolerance, claim_holds=ok)
            if not ok:
                status = EXIT_REFUTED
        blob = json.dumps(payload, indent=2) + "\n"
        if a.fit_output is not None:
            a.fit_output.write_text(blob, encoding="utf-8")
        else:
            sys.stderr.write(blob)
        if a.loglog is not None:
            a.loglog.write_text(loglog_table(records), encoding="utf-8")
    return status


def _cmd_oracle_verify(a) -> int:
    X = _read_input(a.input)
    mismatches = []
    step = 0
    cur = X
    while len(cur):
        step += 1
        fast = extreme_points(cur)
        slow = extreme_points_oracle(cur)
        if fast != slow:
            mismatches.append(
                {
                    "step": step,
                    "engine_only": sorted(int(cur.ids[i]) for i in fast - slow),
                    "oracle_only": sorted(int(cur.ids[i]) for i in slow - fast),
                }
            )
        if not a.all_steps:
            break
        cur = peel_step(cur)
    out = {"steps_checked": step, "match": not mismatches, "mismatches": mismatches}
    sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return EXIT_OK if not mismatches else EXIT_REFUTED


def _cmd_cap(a) -> int:
    X = _read_input(a.input)
    diag = cap_diagnostic(X, a.inner_radius)
    sys.stdout.write(json.dumps(diag.__dict__, indent=2) + "\n")
    return EXIT_OK if diag.bound_holds else EXIT_REFUTED


_COMMANDS = {
    "generate": _cmd_generate,
    "peel": _cmd_peel,
    "check-even": _cmd_check_even,
    "experiment": _cmd_experiment,
    "oracle-verify": _cmd_oracle_verify,
    "cap-diagnostic": _cmd_cap,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise CliError("a subcommand is required (try --help)")
        return _COMMANDS[args.command](args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (CliError, PointSetFormatError, GeometryError, ValueError, OSError) as exc:
        msg = str(exc).replace("\n", " ")
        sys.stderr.write(f"layerpeel: error: {msg}\n")
        return EXIT_INVALID


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
