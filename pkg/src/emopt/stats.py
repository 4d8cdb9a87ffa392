"""Run aggregation and the two-sample Wilcoxon/Mann-Whitney rank-sum test.

Repeated seeded runs are summarized as averaged best value and averaged
iterations-to-termination; algorithm pairs are compared per function with a
two-sided rank-sum test at the 5% level, on both the best-value and the
iteration-count samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import RunRecord

__all__ = [
    "AggregateResult",
    "WilcoxonResult",
    "AlgorithmComparison",
    "aggregate",
    "wilcoxon_rank_sum",
    "compare_algorithms",
    "MIN_SAMPLE_SIZE",
]

MIN_SAMPLE_SIZE = 5
EXACT_LIMIT = 10  # exact enumeration below this many observations per side


@dataclass
class AggregateResult:
    """Summary of repeated runs of one algorithm on one function."""

    function_id: str
    algorithm_id: str
    runs: int
    averaged_best: float
    averaged_iterations: float
    averaged_evaluations: float
    best_values: list[float]
    iteration_counts: list[int]
    evaluation_counts: list[int]
    best_trace: list[float]  # per-iteration best of the single best run


@dataclass(frozen=True)
class WilcoxonResult:
    """Two-sided rank-sum outcome; statistic is the smaller Mann-Whitney U."""

    statistic: float
    p_value: float
    significant_at_5pct: bool
    method: str = "normal"


@dataclass(frozen=True)
class AlgorithmComparison:
    function_id: str
    pair: str
    best: WilcoxonResult
    iterations: WilcoxonResult


def aggregate(records: list[RunRecord]) -> AggregateResult:
    """Mean best value / iterations / evaluations over same-cell runs.

    The stored trace is the one of the run with the lowest final best value
    (first such run on ties), for convergence plots.
    """
    if not records:
        raise ValueError("aggregate needs at least one run record")
    functions = {r.function for r in records}
    algorithms = {r.algorithm for r in records}
    if len(functions) > 1 or len(algorithms) > 1:
        raise ValueError("all records must come from the same function and algorithm")
    best_values = [float(r.best_fitness) for r in records]
    champion = records[int(np.argmin(best_values))]
    return AggregateResult(
        function_id=functions.pop(),
        algorithm_id=algorithms.pop(),
        runs=len(records),
        averaged_best=float(np.mean(best_values)),
        averaged_iterations=float(np.mean([r.iterations for r in records])),
        averaged_evaluations=float(np.mean([r.evaluations for r in records])),
        best_values=best_values,
        iteration_counts=[int(r.iterations) for r in records],
        evaluation_counts=[int(r.evaluations) for r in records],
        best_trace=[float(v) for v in champion.trace],
    )


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Fractional ranking: tied values share the mean of their rank block."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size)
    sorted_vals = values[order]
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _tie_term(ranks: np.ndarray) -> float:
    _, counts = np.unique(ranks, return_counts=True)
    return float((counts.astype(float) ** 3 - counts).sum())


def _exact_two_sided_p(ranks: np.ndarray, n1: int, observed: float) -> float:
    """Exact permutation p-value of the group-1 rank sum, two-sided around
    the null mean; handles ties because it enumerates the actual ranks."""
    total = ranks.size
    mean = n1 * (total + 1) / 2
    threshold = abs(observed - mean) - 1e-9
    hits = 0
    count = 0
    for subset in combinations(range(total), n1):
        count += 1
        if abs(ranks[list(subset)].sum() - mean) >= threshold:
            hits += 1
    return hits / count


def wilcoxon_rank_sum(sample_a, sample_b) -> WilcoxonResult:
    """Two-sided Mann-Whitney/Wilcoxon rank-sum test.

    Exact permutation enumeration when both samples have fewer than 10
    observations; otherwise the normal approximation with average ranks,
    tie-corrected variance and continuity correction.  Two completely
    identical samples give p = 1.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.ndim != 1 or b.ndim != 1:
        raise ValueError("samples must be one-dimensional")
    n1, n2 = a.size, b.size
    if n1 < MIN_SAMPLE_SIZE or n2 < MIN_SAMPLE_SIZE:
        raise ValueError(f"each sample needs at least {MIN_SAMPLE_SIZE} observations")

    ranks = _average_ranks(np.concatenate([a, b]))
    rank_sum_a = float(ranks[:n1].sum())
    u1 = rank_sum_a - n1 * (n1 + 1) / 2
    u_min = min(u1, n1 * n2 - u1)

    if n1 < EXACT_LIMIT and n2 < EXACT_LIMIT:
        p = _exact_two_sided_p(ranks, n1, rank_sum_a)
        method = "exact"
    else:
        total = n1 + n2
        variance = n1 * n2 / 12 * ((total + 1) - _tie_term(ranks) / (total * (total - 1)))
        if variance <= 0:
            p = 1.0
        else:
            z = (u_min - n1 * n2 / 2 + 0.5) / math.sqrt(variance)
            p = min(1.0, 2 * 0.5 * math.erfc(-z / math.sqrt(2)))
        method = "normal"
    return WilcoxonResult(
        statistic=float(u_min),
        p_value=float(p),
        significant_at_5pct=bool(p < 0.05),
        method=method,
    )


def compare_algorithms(a: AggregateResult, b: AggregateResult) -> AlgorithmComparison:
    """Rank-sum tests over the two per-run samples: best values and iteration counts."""
    if a.function_id != b.function_id:
        raise ValueError("aggregates compare different functions")
    if a.runs != b.runs:
        raise ValueError("aggregates have different run counts")
    return AlgorithmComparison(
        function_id=a.function_id,
        pair=f"{a.algorithm_id}_vs_{b.algorithm_id}",
        best=wilcoxon_rank_sum(a.best_values, b.best_values),
        iterations=wilcoxon_rank_sum(a.iteration_counts, b.iteration_counts),
    )
