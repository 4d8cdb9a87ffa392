"""Command-line front end.

Subcommands:

* ``run``    - execute a campaign (config file and/or flags) and emit reports
* ``verify`` - audit every benchmark minimum with the independent oracle
* ``table``  - re-emit tables and figures from a stored report.json
* ``list``   - show the benchmark registry

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 output I/O error, 4 missing/partial stored campaign.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields, replace
from pathlib import Path

import yaml

from . import benchmarks, campaign
from .engine import EmoParams
from .opposition import OppositionConfig

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_PARTIAL = 4


def _csv_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emopt",
        description="Electromagnetism-like global optimization experiment harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a campaign and write reports")
    run.add_argument("--config", type=Path, help="YAML/JSON campaign config file")
    run.add_argument("--functions", type=_csv_list, help="comma-separated ids or names (default: all)")
    run.add_argument("--algorithms", type=_csv_list, help="subset of emo,obemo")
    run.add_argument("--runs", type=int, help="seeded runs per cell (default 35)")
    run.add_argument("--seed", type=int, help="campaign base seed")
    run.add_argument("--max-iters", type=int, help="iteration cap override for every function")
    run.add_argument("--out", type=Path, help="output directory")
    run.add_argument("--formats", type=_csv_list, help="subset of csv,json")
    run.add_argument("--threads", type=int, help="parallel cells (also capped by EMOPT_THREADS)")
    plot_group = run.add_mutually_exclusive_group()
    plot_group.add_argument("--plots", dest="plots", action="store_true", default=None)
    plot_group.add_argument("--no-plots", dest="plots", action="store_false")

    verify = sub.add_parser("verify", help="audit benchmark minima with the oracle")
    verify.add_argument("--budget", type=int, default=250_000, help="oracle evaluations per function")

    table = sub.add_parser("table", help="re-emit tables from a stored campaign")
    table.add_argument("--out", type=Path, required=True, help="directory holding report.json")
    table.add_argument("--no-plots", dest="plots", action="store_false", default=True)

    sub.add_parser("list", help="show the benchmark registry")
    return parser


def _load_config_file(path: Path) -> dict:
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ValueError(f"cannot read config file: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError("config file must hold a mapping")
    return data


def _sub_config(cls, data: dict, section: str):
    values = data.get(section, {})
    if not isinstance(values, dict):
        raise ValueError(f"config section {section!r} must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown keys in {section!r}: {sorted(unknown)}")
    return cls(**values)


def _build_campaign(args) -> campaign.CampaignConfig:
    data = _load_config_file(args.config) if args.config else {}

    emo = _sub_config(EmoParams, data, "emo")
    opposition = _sub_config(OppositionConfig, data, "opposition")

    functions = args.functions or data.get("functions") or benchmarks.function_ids()
    if functions in (["all"], "all"):
        functions = benchmarks.function_ids()
    # Resolve names to ids early; unknown entries fail before any run.
    functions = [benchmarks.lookup(f).id for f in functions]

    config = campaign.CampaignConfig(
        functions=tuple(functions),
        algorithms=tuple(args.algorithms or data.get("algorithms") or campaign.ALGORITHMS),
        runs=args.runs or data.get("runs") or 35,
        base_seed=args.seed if args.seed is not None else data.get("seed", 42),
        emo=emo,
        opposition=opposition,
        max_iterations=args.max_iters or data.get("max_iterations"),
        output_dir=str(args.out or data.get("out", "results")),
        formats=tuple(args.formats or data.get("formats") or ("csv", "json")),
        plots=args.plots if args.plots is not None else data.get("plots", True),
        threads=args.threads or data.get("threads"),
    )
    if args.max_iters is not None:
        config = replace(config, emo=replace(emo, max_iterations=args.max_iters))
    return config


def _cmd_run(args) -> int:
    try:
        config = _build_campaign(args)
    except (KeyError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = campaign.run_campaign(config)
    try:
        written = campaign.emit_tables(
            report, config.output_dir, formats=config.formats, plots=config.plots
        )
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for agg in campaign._sorted_aggregates(report):
        print(
            f"{agg.function_id:4s} {agg.algorithm_id:6s} "
            f"avg_best={agg.averaged_best:+.6g} avg_iters={agg.averaged_iterations:.1f} "
            f"avg_evals={agg.averaged_evaluations:.0f}"
        )
    print(f"wrote {len(written)} files to {config.output_dir}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        checks = benchmarks.verify_minima(oracle_budget=args.budget)
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    failed = False
    for c in checks:
        status = "ok" if c.ok else "FAIL"
        line = (
            f"{c.id:4s} {c.name:16s} oracle={c.oracle_minimum:+.6f} "
            f"canonical={c.canonical_minimum:+.6f} reference={c.reference_minimum:+.6f} "
            f"[{status}]"
        )
        if c.note:
            line += f" {c.note}"
        print(line)
        failed = failed or not c.ok
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def _cmd_table(args) -> int:
    try:
        report = campaign.load_report(args.out)
    except (FileNotFoundError, ValueError) as exc:
        print(f"stored campaign error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    try:
        written = campaign.emit_tables(report, args.out, plots=args.plots)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"re-emitted {len(written)} files to {args.out}")
    return EXIT_OK


def _cmd_list(_args) -> int:
    for entry in benchmarks.registry():
        lo, hi = entry.space.lower, entry.space.upper
        domain = (
            f"[{lo[0]:g}, {hi[0]:g}]^{entry.dims}"
            if (lo == lo[0]).all() and (hi == hi[0]).all()
            else " x ".join(f"[{a:g}, {b:g}]" for a, b in zip(lo, hi))
        )
        print(
            f"{entry.id:4s} {entry.name:16s} n={entry.dims:<3d} {domain:18s} "
            f"min={entry.canonical_minimum:+.6g} (reference {entry.reference_minimum:+.6g})"
        )
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "run": _cmd_run,
        "verify": _cmd_verify,
        "table": _cmd_table,
        "list": _cmd_list,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
