"""Command-line interface.

Exit codes: 0 on success (all checks passed), 1 when a reproduction or
lemma check fails, 2 on bad input or usage.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import repro
from .channels import InvalidChannelError, classify
from .fileio import FormatError, parse_channel_file, resolve_tol
from .measures import CoherenceMeasure
from .optimize import OptimizerConfig, default_seed
from .powers import (
    PowerKind,
    cohering_power,
    decohering_power,
    generalized_cohering_power,
    generalized_decohering_power,
)
from .states import InvalidStateError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

POWER_FUNCS = {
    PowerKind.COHERING: lambda phi, m, cfg: cohering_power(phi, m),
    PowerKind.GEN_COHERING: generalized_cohering_power,
    PowerKind.DECOHERING: decohering_power,
    PowerKind.GEN_DECOHERING: generalized_decohering_power,
}


def _add_global_flags(p: argparse.ArgumentParser, defaults: bool) -> None:
    # On subcommands the defaults are suppressed so a flag given before the
    # subcommand is not overwritten by the subparser's default.
    kw = {} if defaults else {"default": argparse.SUPPRESS}
    p.add_argument("--tol", type=float, help="validation / class-test tolerance (default 1e-10)", **kw)
    p.add_argument("--relaxed", action="store_true", help="validate inputs at printed precision (5e-4)", **kw)
    p.add_argument("--json", action="store_true", help="emit one JSON document instead of a table", **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cohpower", description="Cohering and de-cohering powers of quantum channels.")
    _add_global_flags(parser, defaults=True)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("classify", help="MIO / DIO / incoherent-Kraus tests for a channel file")
    _add_global_flags(p, defaults=False)
    p.add_argument("channel", help="channel JSON file")

    p = sub.add_parser("power", help="compute one power functional")
    _add_global_flags(p, defaults=False)
    p.add_argument("--kind", required=True, choices=[k.value for k in PowerKind])
    p.add_argument("--measure", required=True, choices=[m.value for m in CoherenceMeasure])
    p.add_argument("--starts", type=int, default=OptimizerConfig.starts, help="random starts (default %(default)s)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $COHPOWER_SEED or 0)")
    p.add_argument("channel", help="channel JSON file")

    p = sub.add_parser("reproduce", help="run reproduction items")
    _add_global_flags(p, defaults=False)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--prop", action="append", choices=list(repro.ITEMS), help="item id (repeatable)")
    which.add_argument("--all", action="store_true", help="run every item")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $COHPOWER_SEED or 0)")
    p.add_argument("--starts", type=int, default=repro.REPRO_STARTS, help="random starts per optimization (default %(default)s)")
    p.add_argument("--jobs", type=int, default=1, help="items run concurrently (default %(default)s)")

    p = sub.add_parser("lemma-check", help="scan the binary-entropy inequality margin on a grid")
    _add_global_flags(p, defaults=False)
    p.add_argument("--grid", type=int, default=10001, help="grid points in [0, 1] (default %(default)s)")
    return parser


def _emit(doc: dict, as_json: bool, table: str) -> None:
    print(json.dumps(doc, indent=2) if as_json else table)


def _cmd_classify(args) -> int:
    tol = resolve_tol(args.tol, args.relaxed)
    phi = parse_channel_file(args.channel, tol=tol)
    rep = classify(phi, tol)
    yes = {True: "yes", False: "no"}
    lines = [
        f"channel: {args.channel} (dim {phi.dim_in}, {len(phi)} Kraus operators)",
        f"MIO:              {yes[rep.is_mio]:<4} max violation {rep.max_violation['mio']:.3e}",
        f"DIO:              {yes[rep.is_dio]:<4} max violation {rep.max_violation['dio']:.3e}",
        f"incoherent-Kraus: {yes[rep.has_incoherent_kraus]:<4} max violation {rep.max_violation['incoherent_kraus']:.3e}",
    ]
    _emit({"channel": args.channel, "tol": tol, **rep.as_dict()}, args.json, "\n".join(lines))
    return EXIT_OK


def _cmd_power(args) -> int:
    tol = resolve_tol(args.tol, args.relaxed)
    phi = parse_channel_file(args.channel, tol=tol)
    seed = default_seed() if args.seed is None else args.seed
    cfg = OptimizerConfig(starts=args.starts, seed=seed)
    kind = PowerKind(args.kind)
    measure = CoherenceMeasure.parse(args.measure)
    rep = POWER_FUNCS[kind](phi, measure, cfg)
    witness = np.array2string(np.asarray(rep.witness), precision=6, suppress_small=True)
    lines = [
        f"{kind.value} power ({measure.value}) of {args.channel}",
        f"value:     {rep.value:.10f}",
        f"converged: {rep.converged}",
        f"starts:    {rep.starts_used} (seed {seed})",
        "witness:",
        witness,
    ]
    _emit({"channel": args.channel, "seed": seed, **rep.as_dict()}, args.json, "\n".join(lines))
    return EXIT_OK


def _report_table(reports) -> str:
    lines = []
    for r in reports:
        lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.id:<8} {r.title} ({r.wall_time:.2f} s)")
        for c in r.checks:
            rel = {"eq": "=", "ge": ">=", "le": "<="}[c.relation]
            mark = "ok " if c.passed else "BAD"
            lines.append(
                f"    {mark} {c.name}: computed {c.computed:.10g} {rel} expected {c.expected:.10g}"
                f" (tol {c.tolerance:g}; {c.source})"
            )
    n_pass = sum(r.passed for r in reports)
    lines.append(f"{n_pass}/{len(reports)} items passed")
    return "\n".join(lines)


def _cmd_reproduce(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    items = None if args.all else args.prop
    reports = repro.run_items(items, seed=seed, starts=args.starts, jobs=args.jobs)
    ok = all(r.passed for r in reports)
    doc = {"seed": seed, "starts": args.starts, "pass": ok, "items": [r.as_dict() for r in reports]}
    _emit(doc, args.json, _report_table(reports))
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_lemma(args) -> int:
    if args.grid < 3:
        raise ValueError("--grid needs at least 3 points")
    low, minima = repro.lemma_scan(args.grid)
    ok = low >= -1e-12
    lines = [
        f"grid points:   {args.grid}",
        f"min margin:    {low:.3e}",
        "local minima:  " + ", ".join(f"{x:g}" for x in minima),
        "result:        " + ("PASS" if ok else "FAIL"),
    ]
    _emit({"grid": args.grid, "min_margin": low, "minima": minima, "pass": ok}, args.json, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "classify": _cmd_classify,
    "power": _cmd_power,
    "reproduce": _cmd_reproduce,
    "lemma-check": _cmd_lemma,
}


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (FormatError, InvalidChannelError, InvalidStateError, OSError, ValueError, KeyError) as exc:
        print(f"cohpower: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
