"""Derivative-free global optimization with the electromagnetism-like
mechanism, its opposition-based acceleration, a 14-function benchmark
suite, and a seeded experiment harness with rank-sum comparisons."""

from .core import (
    ObjectiveSpec,
    Particle,
    Population,
    RunRecord,
    SearchSpace,
    clamp_to_box,
    make_rng,
)
from .engine import EmoParams, ForceVector, run_emo
from .opposition import OppositionConfig, opposite_point, run_obemo
from .benchmarks import BenchmarkEntry, lookup, registry, verify_minima
from .stats import (
    AggregateResult,
    AlgorithmComparison,
    WilcoxonResult,
    aggregate,
    compare_algorithms,
    wilcoxon_rank_sum,
)
from .campaign import CampaignConfig, CampaignReport, cell_seed, emit_tables, run_campaign

__version__ = "0.1.0"

__all__ = [
    "SearchSpace",
    "Particle",
    "Population",
    "ObjectiveSpec",
    "RunRecord",
    "clamp_to_box",
    "make_rng",
    "EmoParams",
    "ForceVector",
    "run_emo",
    "OppositionConfig",
    "opposite_point",
    "run_obemo",
    "BenchmarkEntry",
    "registry",
    "lookup",
    "verify_minima",
    "AggregateResult",
    "WilcoxonResult",
    "AlgorithmComparison",
    "aggregate",
    "wilcoxon_rank_sum",
    "compare_algorithms",
    "CampaignConfig",
    "CampaignReport",
    "cell_seed",
    "run_campaign",
    "emit_tables",
    "__version__",
]
