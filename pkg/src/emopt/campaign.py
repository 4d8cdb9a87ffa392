"""Experiment campaigns: algorithm x function x seeded runs, with reports.

A campaign cell is one (function, algorithm) pair; every run inside a cell
gets a seed derived from a stable content hash of (base_seed, function id,
algorithm id, run index), so results are reproducible run-for-run no matter
how cells are scheduled, edited, or parallelized.  Emitted CSV/JSON files
are byte-identical across repeated executions of the same configuration.
"""

from __future__ import annotations

import hashlib
import json
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import benchmarks
from .core import RunRecord
from .engine import EmoParams, run_emo
from .opposition import OppositionConfig, run_obemo
from .stats import (
    MIN_SAMPLE_SIZE,
    AggregateResult,
    AlgorithmComparison,
    aggregate,
    compare_algorithms,
)

__all__ = [
    "CampaignConfig",
    "CampaignReport",
    "cell_seed",
    "default_max_iterations",
    "run_campaign",
    "emit_tables",
    "load_report",
    "worker_count",
]

ALGORITHMS = ("emo", "obemo")
SCHEMA_VERSION = 1

# Caps sit well above typical stagnation points so the stagnation rule, not
# the cap, normally ends a run.
MAX_ITER_LOW_DIM = 2000
MAX_ITER_HIGH_DIM = 1000


@dataclass(frozen=True)
class CampaignConfig:
    """Declarative description of one experiment campaign."""

    functions: tuple[str, ...]
    algorithms: tuple[str, ...] = ALGORITHMS
    runs: int = 35
    base_seed: int = 42
    emo: EmoParams = field(default_factory=EmoParams)
    opposition: OppositionConfig = field(default_factory=OppositionConfig)
    max_iterations: int | None = None  # None: per-function default
    output_dir: str = "results"
    formats: tuple[str, ...] = ("csv", "json")
    plots: bool = True
    threads: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "formats", tuple(self.formats))
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        for alg in self.algorithms:
            if alg not in ALGORITHMS:
                raise ValueError(f"unknown algorithm: {alg!r}")
        if not self.functions:
            raise ValueError("campaign needs at least one function")
        for fmt in self.formats:
            if fmt not in ("csv", "json"):
                raise ValueError(f"unknown output format: {fmt!r}")


@dataclass
class CampaignReport:
    """In-memory campaign result: per-cell aggregates plus pairwise tests."""

    config: dict
    aggregates: list[AggregateResult]
    comparisons: list[AlgorithmComparison]
    seeds: dict[tuple[str, str], list[int]]
    complete: bool = True


def cell_seed(base_seed: int, function_id: str, algorithm: str, run_index: int) -> int:
    """Stable 64-bit per-run seed; independent of any other campaign cell."""
    key = f"{base_seed}|{function_id}|{algorithm}|{run_index}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


def default_max_iterations(entry: benchmarks.BenchmarkEntry) -> int:
    return MAX_ITER_HIGH_DIM if entry.dims >= 10 else MAX_ITER_LOW_DIM


def worker_count(requested: int | None = None) -> int:
    """Parallelism degree: requested (or cpu count), capped by EMOPT_THREADS."""
    count = requested if requested and requested > 0 else (os.cpu_count() or 1)
    cap = os.environ.get("EMOPT_THREADS")
    if cap:
        count = min(count, max(1, int(cap)))
    return count


def _run_one(task) -> tuple:
    function_id, algorithm, seed, params_dict, opp_dict = task
    objective = benchmarks.lookup(function_id).objective()
    params = EmoParams(**params_dict)
    if algorithm == "emo":
        record = run_emo(objective, params, seed)
    else:
        record = run_obemo(objective, params, OppositionConfig(**opp_dict), seed)
    return (
        function_id,
        algorithm,
        seed,
        record.best_fitness,
        record.iterations,
        record.evaluations,
        record.termination,
        record.best_position.tolist(),
        record.trace.tolist(),
    )


def _to_record(row) -> RunRecord:
    fid, alg, seed, best, iters, evals, termination, position, trace = row
    return RunRecord(
        function=fid,
        algorithm=alg,
        best_position=np.asarray(position),
        best_fitness=best,
        iterations=iters,
        evaluations=evals,
        trace=np.asarray(trace),
        termination=termination,
        seed=seed,
    )


def run_campaign(config: CampaignConfig) -> CampaignReport:
    """Execute every (function, algorithm, run) cell and aggregate.

    Unknown function ids raise KeyError before any run starts.  Independent
    runs execute in parallel when more than one worker is available; results
    are keyed by their cell and sorted canonically, so scheduling cannot
    change any output.
    """
    entries = {fid: benchmarks.lookup(fid) for fid in config.functions}

    tasks = []
    for fid in config.functions:
        cap = config.max_iterations or default_max_iterations(entries[fid])
        params = replace(config.emo, max_iterations=cap)
        params_dict = asdict(params)
        opp_dict = asdict(config.opposition)
        for alg in config.algorithms:
            for k in range(config.runs):
                seed = cell_seed(config.base_seed, fid, alg, k)
                tasks.append((fid, alg, seed, params_dict, opp_dict))

    workers = worker_count(config.threads)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_one, tasks, chunksize=1))
    else:
        rows = [_run_one(t) for t in tasks]

    by_cell: dict[tuple[str, str], list[RunRecord]] = {}
    for row in rows:
        by_cell.setdefault((row[0], row[1]), []).append(_to_record(row))

    aggregates = []
    seeds = {}
    for fid in config.functions:
        for alg in config.algorithms:
            records = by_cell[(fid, alg)]
            aggregates.append(aggregate(records))
            seeds[(fid, alg)] = [r.seed for r in records]

    comparisons = _compare_all(config.functions, config.algorithms, aggregates, config.runs)
    return CampaignReport(
        config=_config_dict(config),
        aggregates=aggregates,
        comparisons=comparisons,
        seeds=seeds,
    )


def _compare_all(functions, algorithms, aggregates, runs) -> list[AlgorithmComparison]:
    if runs < MIN_SAMPLE_SIZE:
        if len(algorithms) > 1:
            warnings.warn(
                f"skipping rank-sum tests: {runs} runs is below the minimum "
                f"sample size of {MIN_SAMPLE_SIZE}",
                stacklevel=3,
            )
        return []
    by_cell = {(a.function_id, a.algorithm_id): a for a in aggregates}
    comparisons = []
    for fid in functions:
        for i, alg_a in enumerate(algorithms):
            for alg_b in algorithms[i + 1 :]:
                comparisons.append(
                    compare_algorithms(by_cell[(fid, alg_a)], by_cell[(fid, alg_b)])
                )
    return comparisons


def _config_dict(config: CampaignConfig) -> dict:
    """Experiment identity only: execution details (output location, thread
    count, emission formats) must not leak into reports, or byte-identity
    across reruns would break."""
    return {
        "functions": list(config.functions),
        "algorithms": list(config.algorithms),
        "runs": config.runs,
        "base_seed": config.base_seed,
        "emo": asdict(config.emo),
        "opposition": asdict(config.opposition),
        "max_iterations": config.max_iterations,
    }


# --- report emission -------------------------------------------------------

def _function_order(fid: str) -> tuple:
    ids = benchmarks.function_ids()
    return (ids.index(fid), "") if fid in ids else (len(ids), fid)


def _sorted_aggregates(report: CampaignReport) -> list[AggregateResult]:
    return sorted(
        report.aggregates, key=lambda a: (_function_order(a.function_id), a.algorithm_id)
    )


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    text = str(value)
    if any(c in text for c in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def emit_tables(
    report: CampaignReport,
    output_dir,
    formats: tuple[str, ...] = ("csv", "json"),
    plots: bool = True,
) -> list[Path]:
    """Write comparison/wilcoxon/trace CSVs, the JSON report, and figures.

    Emission refuses an incomplete report (exit path for partially stored
    campaigns).  Row order and float formatting are canonical, so repeated
    emission of the same report is byte-identical.
    """
    if not report.complete:
        raise ValueError("refusing to emit tables for an incomplete campaign")
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory not writable: {out}") from exc

    written = []
    aggregates = _sorted_aggregates(report)

    if "csv" in formats:
        comparison = out / "comparison.csv"
        _write_csv(
            comparison,
            ["function", "algorithm", "averaged_best", "averaged_iterations", "averaged_evaluations"],
            [
                [a.function_id, a.algorithm_id, a.averaged_best, a.averaged_iterations, a.averaged_evaluations]
                for a in aggregates
            ],
        )
        written.append(comparison)

        wilcoxon = out / "wilcoxon.csv"
        rows = []
        for comp in sorted(report.comparisons, key=lambda c: (_function_order(c.function_id), c.pair)):
            for metric, result in (("best", comp.best), ("iterations", comp.iterations)):
                rows.append(
                    [comp.function_id, comp.pair, metric, result.statistic, result.p_value, result.significant_at_5pct]
                )
        _write_csv(wilcoxon, ["function", "pair", "metric", "statistic", "p_value", "significant"], rows)
        written.append(wilcoxon)

        for agg in aggregates:
            trace_path = out / f"trace_{agg.function_id}_{agg.algorithm_id}.csv"
            _write_csv(
                trace_path,
                ["iteration", "best_so_far"],
                [[i + 1, v] for i, v in enumerate(agg.best_trace)],
            )
            written.append(trace_path)

    if "json" in formats:
        written.append(_write_json(report, out, aggregates))

    if plots:
        from . import plots as plots_module

        by_function: dict[str, dict[str, list[float]]] = {}
        for agg in aggregates:
            by_function.setdefault(agg.function_id, {})[agg.algorithm_id] = agg.best_trace
        for fid, traces in by_function.items():
            written.append(
                plots_module.convergence_figure(fid, traces, out / f"fig_{fid}.png")
            )
    return written


def _write_json(report: CampaignReport, out: Path, aggregates) -> Path:
    results = []
    for agg in aggregates:
        seeds = report.seeds.get((agg.function_id, agg.algorithm_id), [None] * agg.runs)
        results.append(
            {
                "function": agg.function_id,
                "algorithm": agg.algorithm_id,
                "runs": [
                    {
                        "run": k,
                        "seed": seeds[k],
                        "best": agg.best_values[k],
                        "iterations": agg.iteration_counts[k],
                        "evaluations": agg.evaluation_counts[k],
                    }
                    for k in range(agg.runs)
                ],
                "averaged_best": agg.averaged_best,
                "averaged_iterations": agg.averaged_iterations,
                "averaged_evaluations": agg.averaged_evaluations,
                "best_trace": agg.best_trace,
            }
        )
    tests = [
        {
            "function": comp.function_id,
            "pair": comp.pair,
            "metric": metric,
            "statistic": result.statistic,
            "p_value": result.p_value,
            "significant": result.significant_at_5pct,
            "method": result.method,
        }
        for comp in sorted(report.comparisons, key=lambda c: (_function_order(c.function_id), c.pair))
        for metric, result in (("best", comp.best), ("iterations", comp.iterations))
    ]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "complete": report.complete,
        "config": report.config,
        "results": results,
        "wilcoxon": tests,
    }
    path = out / "report.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def load_report(output_dir) -> CampaignReport:
    """Rebuild a CampaignReport from a stored report.json (for re-emission).

    Aggregates are recomputed from the stored per-run values; rank-sum tests
    are recomputed from the same samples.  Raises FileNotFoundError when no
    report exists and ValueError when the stored campaign is incomplete.
    """
    path = Path(output_dir) / "report.json"
    if not path.exists():
        raise FileNotFoundError(f"no stored campaign at {path}")
    payload = json.loads(path.read_text())
    if not payload.get("complete", False):
        raise ValueError("stored campaign is incomplete")

    aggregates = []
    seeds = {}
    for cell in payload["results"]:
        runs = cell["runs"]
        best_values = [r["best"] for r in runs]
        aggregates.append(
            AggregateResult(
                function_id=cell["function"],
                algorithm_id=cell["algorithm"],
                runs=len(runs),
                averaged_best=float(np.mean(best_values)),
                averaged_iterations=float(np.mean([r["iterations"] for r in runs])),
                averaged_evaluations=float(np.mean([r["evaluations"] for r in runs])),
                best_values=best_values,
                iteration_counts=[r["iterations"] for r in runs],
                evaluation_counts=[r["evaluations"] for r in runs],
                best_trace=cell["best_trace"],
            )
        )
        seeds[(cell["function"], cell["algorithm"])] = [r["seed"] for r in runs]

    config = payload["config"]
    comparisons = _compare_all(
        tuple(config["functions"]),
        tuple(config["algorithms"]),
        aggregates,
        int(config["runs"]),
    )
    return CampaignReport(
        config=config, aggregates=aggregates, comparisons=comparisons, seeds=seeds
    )
