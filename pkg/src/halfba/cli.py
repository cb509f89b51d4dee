"""Command-line front end: single runs, parameter sweeps, and oracle suites.

Configuration comes from flags or a JSON file with the same field names
(flags win on conflict).  Exit codes: 0 success, 1 an in-contract guarantee
was violated (or an oracle found a counterexample), 2 usage error.  All
output is a pure function of the configuration and seeds.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys

from . import engine
from .faults import FaultPlan
from .metrics import RunMetrics, fit_linear, render_csv, write_csv
from .oracles import bgc_oracle, cool_oracle, rs_oracle
from .values import Bits, predicate_names

OK, GUARANTEE_VIOLATED, USAGE_ERROR = 0, 1, 2

RUN_FIELDS = ("n", "t", "L", "proposals", "faults", "seed", "valid", "out")
SWEEP_FIELDS = ("n", "t", "L", "proposals", "faults", "seed", "valid", "out", "trials")

DEFAULTS = {
    "t": None,
    "L": 64,
    "proposals": "unanimous",
    "faults": "none",
    "seed": 0,
    "valid": "always",
    "out": None,
    "trials": 1,
}


class UsageError(Exception):
    pass


def _merged(args: argparse.Namespace, fields: tuple[str, ...]) -> dict:
    cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config {args.config}: {e}")
        unknown = set(cfg) - set(fields)
        if unknown:
            raise UsageError(f"unknown config fields: {', '.join(sorted(unknown))}")
    merged = {}
    for f in fields:
        flag = getattr(args, f, None)
        merged[f] = flag if flag is not None else cfg.get(f, DEFAULTS.get(f))
    if merged.get("n") is None:
        raise UsageError("--n is required (flag or config)")
    return merged


def _parse_plan(text: str) -> FaultPlan:
    try:
        return FaultPlan.parse(text)
    except ValueError as e:
        raise UsageError(str(e))


def _proposals(n: int, length: int, mode: str, valid: str, seed: int) -> dict[int, Bits]:
    if mode.startswith("unanimous:"):
        hexpart = mode.partition(":")[2]
        try:
            value = Bits(4 * len(hexpart), int(hexpart, 16))
        except ValueError as e:
            raise UsageError(f"bad unanimous value {hexpart!r}: {e}")
        return {p: value for p in range(n)}
    if mode not in ("unanimous", "distinct", "random"):
        raise UsageError(f"unknown proposal mode {mode!r}")
    rng = random.Random(f"cli|{n}|{length}|{seed}")
    try:
        return engine.make_proposals(n, length, mode, valid, rng)
    except ValueError as e:
        raise UsageError(str(e))


def _flag(name: str, ok: bool) -> str:
    return f"{name}={'ok' if ok else 'VIOLATED'}"


def _print_run(m: RunMetrics) -> None:
    print(
        f"run {m.run_id}: n={m.n} t={m.t} L={m.length} "
        f"faults={m.strategy} seed={m.seed}"
    )
    print(f"rounds={m.rounds} total_bits={m.total_bits} dropped={m.dropped}")
    values = {d for d in m.decisions.values()}
    if len(values) == 1:
        d = values.pop()
        print(f"decision (all correct processes): {d.hex_digest() if d else 'none'}")
    else:
        for pid in sorted(m.decisions):
            d = m.decisions[pid]
            print(f"decision p{pid}: {d.hex_digest() if d else 'none'}")
    strong = (
        _flag("strong_validity", m.strong_validity_ok)
        if m.strong_validity_applicable
        else "strong_validity=n/a"
    )
    print(
        f"{_flag('agreement', m.agreement_ok)} {strong} "
        f"{_flag('validity', m.validity_ok)} contract_violated={str(m.contract_violated).lower()}"
    )
    for note in m.notes:
        print(f"note: {note}")


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _merged(args, RUN_FIELDS)
    plan = _parse_plan(cfg["faults"])
    proposals = _proposals(cfg["n"], cfg["L"], cfg["proposals"], cfg["valid"], cfg["seed"])
    try:
        metrics = engine.run(
            cfg["n"], proposals, plan=plan, seed=cfg["seed"], t=cfg["t"], valid=cfg["valid"]
        )
    except ValueError as e:
        raise UsageError(str(e))
    _print_run(metrics)
    if cfg["out"]:
        write_csv(cfg["out"], [metrics])
        print(f"wrote {cfg['out']}")
    if metrics.contract_violated:
        return OK  # flagged in the row; guarantees are not promised here
    return OK if metrics.all_ok else GUARANTEE_VIOLATED


def _parse_int_list(text) -> list[int]:
    if isinstance(text, list):
        return [int(x) for x in text]
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad integer list {text!r}")


def print_sweep_fit(rows: list[RunMetrics]) -> None:
    """Fit total_bits to a*(n log2 n * L) + b*(n^2 log2 n) and report R^2."""
    usable = [r for r in rows if not r.contract_violated]
    if len({r.n for r in usable}) < 2:
        print("fit skipped: need at least two distinct n values")
        return
    col1 = [r.n * math.log2(r.n) * r.length for r in usable]
    col2 = [r.n * r.n * math.log2(r.n) for r in usable]
    y = [r.total_bits for r in usable]
    coef, r2 = fit_linear([col1, col2], y)
    print(
        f"fit total_bits ~ a*(n*log2(n)*L) + b*(n^2*log2(n)): "
        f"a={coef[0]:.4f} b={coef[1]:.4f} R2={r2:.4f}"
    )


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _merged(args, SWEEP_FIELDS)
    n_list = _parse_int_list(cfg["n"])
    lengths = _parse_int_list(cfg["L"])
    try:
        rows = engine.sweep(
            n_list,
            lengths,
            trials=cfg["trials"],
            faults=cfg["faults"],
            valid=cfg["valid"],
            proposal_mode=cfg["proposals"],
            seed=cfg["seed"],
        )
    except ValueError as e:
        raise UsageError(str(e))
    text = render_csv(rows)
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(text)
        print(f"wrote {cfg['out']} ({len(rows)} rows)")
    else:
        print(text, end="")
    print_sweep_fit(rows)
    bad = [r for r in rows if not r.contract_violated and not r.all_ok]
    if bad:
        for r in bad:
            print(f"guarantee violated in {r.run_id}", file=sys.stderr)
        return GUARANTEE_VIOLATED
    return OK


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.suite == "rs":
        report = rs_oracle(
            trials=args.trials or 10_000, agreement_trials=1_000, seed=args.seed or 0
        )
    elif args.suite == "bgc":
        report = bgc_oracle()
    else:
        report = cool_oracle(seeds=args.trials or 1_000, base_seed=args.seed or 0)
    print(report.summary())
    for failure in report.failures:
        print(f"counterexample: {failure}")
    return OK if report.ok else GUARANTEE_VIOLATED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halfba",
        description="Round-recursive Byzantine agreement simulator and oracle suite",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one agreement run")
    sweep_p = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    for p in (run_p, sweep_p):
        p.add_argument("--n", type=str, default=None, help="process count (sweep: comma list)")
        p.add_argument("--t", type=int, default=None, help="fault tolerance override")
        p.add_argument("--L", type=str, default=None, help="proposal bits (sweep: comma list)")
        p.add_argument(
            "--proposals",
            default=None,
            help="unanimous | unanimous:<hex> | distinct | random",
        )
        p.add_argument("--faults", default=None, help='fault plan, e.g. "equivocate@2+silent@5"')
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--valid", default=None, choices=predicate_names(), help="validity predicate")
        p.add_argument("--out", default=None, help="CSV output path")
        p.add_argument("--config", default=None, help="JSON config file (flags win)")
    sweep_p.add_argument("--trials", type=int, default=None, help="runs per (n, L) pair")

    oracle_p = sub.add_parser("oracle", help="run a brute-force oracle suite")
    oracle_p.add_argument("suite", choices=("rs", "bgc", "cool"))
    oracle_p.add_argument("--trials", type=int, default=None)
    oracle_p.add_argument("--seed", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            try:
                args.n = int(args.n) if args.n is not None else None
                args.L = int(args.L) if args.L is not None else None
            except ValueError as e:
                raise UsageError(str(e))
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_oracle(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
