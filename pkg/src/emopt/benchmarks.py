"""Benchmark registry: 14 bounded minimization problems with verified minima.

The suite mirrors a widely used comparison set: nine classic low-dimensional
problems (Branin, Six-Hump Camel, Goldstein-Price, Hartmann 3/6, Shekel
5/7/10, Shubert) plus five 30-dimensional multimodal problems (Rastrigin,
Ackley, Griewank and the two penalized functions).

Each entry carries two minima:

* ``reference_minimum`` - the value as quoted alongside this test set in the
  comparative-study literature, stored unmodified for traceability.
* ``canonical_minimum`` - the value the independent verification oracle
  actually attains on the implemented function.

The two agree within 1e-3 for every function except ``f5`` (Hartmann-6),
where the commonly quoted -3.8623 does not belong to this function; the
verified minimum is about -3.3224.  ``verify_minima`` reports the
discrepancy instead of hiding it.

All evaluators are pure, vectorized over a (k, n) batch, and safe to call
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import ObjectiveSpec, SearchSpace
from . import oracle

__all__ = [
    "BenchmarkEntry",
    "MinimumCheck",
    "penalty_u",
    "registry",
    "lookup",
    "function_ids",
    "verify_minima",
]


# --- low-dimensional set -------------------------------------------------

def branin(xs: np.ndarray) -> np.ndarray:
    """Branin on [-5,10]x[0,15]; minimum 0.397887 at (pi, 2.275) and two mirrors."""
    x1, x2 = xs[:, 0], xs[:, 1]
    a = x2 - 5.1 / (4 * np.pi**2) * x1**2 + 5 / np.pi * x1 - 6
    return a**2 + 10 * (1 - 1 / (8 * np.pi)) * np.cos(x1) + 10


def six_hump_camel(xs: np.ndarray) -> np.ndarray:
    """Six-hump camel-back on [-2,2]^2; minimum -1.0316 at (+-0.0898, -+0.7127)."""
    x1, x2 = xs[:, 0], xs[:, 1]
    return (4 - 2.1 * x1**2 + x1**4 / 3) * x1**2 + x1 * x2 + (-4 + 4 * x2**2) * x2**2


def goldstein_price(xs: np.ndarray) -> np.ndarray:
    """Goldstein-Price on [-2,2]^2; minimum 3 at (0, -1)."""
    x1, x2 = xs[:, 0], xs[:, 1]
    a = 1 + (x1 + x2 + 1) ** 2 * (
        19 - 14 * x1 + 3 * x1**2 - 14 * x2 + 6 * x1 * x2 + 3 * x2**2
    )
    b = 30 + (2 * x1 - 3 * x2) ** 2 * (
        18 - 32 * x1 + 12 * x1**2 + 48 * x2 - 36 * x1 * x2 + 27 * x2**2
    )
    return a * b


# Dixon-Szego Hartmann coefficients (4x3 and 4x6).
_HARTMANN_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HARTMANN3_A = np.array(
    [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]]
)
_HARTMANN3_P = 1e-4 * np.array(
    [[3689, 1170, 2673], [4699, 4387, 7470], [1091, 8732, 5547], [381, 5743, 8828]]
)
_HARTMANN6_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
_HARTMANN6_P = 1e-4 * np.array(
    [
        [1312, 1696, 5569, 124, 8283, 5886],
        [2329, 4135, 8307, 3736, 1004, 9991],
        [2348, 1451, 3522, 2883, 3047, 6650],
        [4047, 8828, 8732, 5743, 1091, 381],
    ]
)


def _hartmann(xs, coeffs, centers):
    d2 = ((xs[:, None, :] - centers[None, :, :]) ** 2 * coeffs[None, :, :]).sum(axis=2)
    return -(_HARTMANN_ALPHA[None, :] * np.exp(-d2)).sum(axis=1)


def hartmann3(xs: np.ndarray) -> np.ndarray:
    """Hartmann 3-D on [0,1]^3; minimum -3.86278."""
    return _hartmann(xs, _HARTMANN3_A, _HARTMANN3_P)


def hartmann6(xs: np.ndarray) -> np.ndarray:
    """Hartmann 6-D on [0,1]^6; minimum -3.32237 (often misquoted as -3.8623)."""
    return _hartmann(xs, _HARTMANN6_A, _HARTMANN6_P)


# Shekel columns are the foxhole centers; beta carries the standard 1/10
# scaling, without which the quoted minima (-10.15/-10.40/-10.54) are not
# attained.  Domain is the canonical [0,10]^4.
_SHEKEL_BETA = 0.1 * np.array([1, 2, 2, 4, 4, 6, 3, 7, 5, 5], dtype=float)
_SHEKEL_C = np.array(
    [
        [4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0],
        [4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 5.0, 1.0, 2.0, 3.6],
        [4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 3.0, 8.0, 6.0, 7.0],
        [4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6],
    ]
)


def shekel(xs: np.ndarray, holes: int) -> np.ndarray:
    centers = _SHEKEL_C.T[:holes]
    d2 = ((xs[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return -(1.0 / (d2 + _SHEKEL_BETA[None, :holes])).sum(axis=1)


def shekel5(xs: np.ndarray) -> np.ndarray:
    """Shekel with 5 foxholes on [0,10]^4; minimum -10.1532 near (4,4,4,4)."""
    return shekel(xs, 5)


def shekel7(xs: np.ndarray) -> np.ndarray:
    """Shekel with 7 foxholes on [0,10]^4; minimum -10.4029 near (4,4,4,4)."""
    return shekel(xs, 7)


def shekel10(xs: np.ndarray) -> np.ndarray:
    """Shekel with 10 foxholes on [0,10]^4; minimum -10.5364 near (4,4,4,4)."""
    return shekel(xs, 10)


def shubert(xs: np.ndarray) -> np.ndarray:
    """Shubert on [-10,10]^2; minimum -186.7309, attained at 18 points."""
    i = np.arange(1.0, 6.0)
    s1 = (i * np.cos((i + 1) * xs[:, 0:1] + i)).sum(axis=1)
    s2 = (i * np.cos((i + 1) * xs[:, 1:2] + i)).sum(axis=1)
    return s1 * s2


# --- 30-dimensional set --------------------------------------------------

def rastrigin(xs: np.ndarray) -> np.ndarray:
    """Rastrigin; minimum 0 at the origin."""
    return (xs**2 - 10 * np.cos(2 * np.pi * xs) + 10).sum(axis=1)


def ackley(xs: np.ndarray) -> np.ndarray:
    """Ackley; minimum 0 at the origin (includes the +e offset that makes it 0)."""
    n = xs.shape[1]
    return (
        -20 * np.exp(-0.2 * np.sqrt((xs**2).sum(axis=1) / n))
        - np.exp(np.cos(2 * np.pi * xs).sum(axis=1) / n)
        + 20
        + np.e
    )


def griewank(xs: np.ndarray) -> np.ndarray:
    """Griewank; minimum 0 at the origin."""
    i = np.sqrt(np.arange(1.0, xs.shape[1] + 1))
    return (xs**2).sum(axis=1) / 4000 - np.cos(xs / i[None, :]).prod(axis=1) + 1


def penalty_u(x, a: float, k: float, m: float):
    """Boundary penalty: k(x-a)^m above a, k(-x-a)^m below -a, 0 in between.

    Continuous at +-a; vectorizes over arrays and accepts scalars.
    """
    x = np.asarray(x, dtype=float)
    out = np.where(x > a, k * (x - a) ** m, np.where(x < -a, k * (-x - a) ** m, 0.0))
    return float(out) if out.ndim == 0 else out


def penalized1(xs: np.ndarray) -> np.ndarray:
    """Levy-style penalized function; minimum 0 at x = (-1, ..., -1)."""
    n = xs.shape[1]
    y = 1 + (xs + 1) / 4
    head = 10 * np.sin(np.pi * y[:, 0]) ** 2
    mid = ((y[:, :-1] - 1) ** 2 * (1 + 10 * np.sin(np.pi * y[:, 1:]) ** 2)).sum(axis=1)
    tail = (y[:, -1] - 1) ** 2
    return np.pi / n * (head + mid + tail) + penalty_u(xs, 10, 100, 4).sum(axis=1)


def penalized2(xs: np.ndarray) -> np.ndarray:
    """Second penalized function (0.1 leading factor); minimum 0 at x = (1, ..., 1)."""
    head = np.sin(3 * np.pi * xs[:, 0]) ** 2
    mid = ((xs[:, :-1] - 1) ** 2 * (1 + np.sin(3 * np.pi * xs[:, 1:]) ** 2)).sum(axis=1)
    tail = (xs[:, -1] - 1) ** 2 * (1 + np.sin(2 * np.pi * xs[:, -1]) ** 2)
    return 0.1 * (head + mid + tail) + penalty_u(xs, 5, 100, 4).sum(axis=1)


# --- registry ------------------------------------------------------------

@dataclass(frozen=True)
class BenchmarkEntry:
    """One registry row; ``objective()`` builds a fresh counted objective."""

    id: str
    name: str
    dims: int
    space: SearchSpace
    evaluator: Callable[[np.ndarray], np.ndarray]
    reference_minimum: float
    canonical_minimum: float

    def objective(self) -> ObjectiveSpec:
        """New ObjectiveSpec with its own evaluation counter."""
        return ObjectiveSpec(
            name=self.id,
            dims=self.dims,
            space=self.space,
            evaluator=self.evaluator,
            known_minimum=self.canonical_minimum,
        )


def _entries() -> list[BenchmarkEntry]:
    box = SearchSpace.cube
    return [
        BenchmarkEntry(
            "f1", "branin",
            2, SearchSpace(np.array([-5.0, 0.0]), np.array([10.0, 15.0])),
            branin, 0.397887, 0.39788735772973816,
        ),
        BenchmarkEntry(
            "f2", "six_hump_camel", 2, box(-2, 2, 2),
            six_hump_camel, -1.031, -1.0316284534898774,
        ),
        BenchmarkEntry(
            "f3", "goldstein_price", 2, box(-2, 2, 2),
            goldstein_price, 3.0, 3.0,
        ),
        BenchmarkEntry(
            "f4", "hartmann3", 3, box(0, 1, 3),
            hartmann3, -3.8627, -3.862782147820756,
        ),
        # Reference value -3.8623 is a known misquote; see module docstring.
        BenchmarkEntry(
            "f5", "hartmann6", 6, box(0, 1, 6),
            hartmann6, -3.8623, -3.322368011391339,
        ),
        BenchmarkEntry(
            "f6", "shekel5", 4, box(0, 10, 4),
            shekel5, -10.1532, -10.153199679058231,
        ),
        BenchmarkEntry(
            "f7", "shekel7", 4, box(0, 10, 4),
            shekel7, -10.4029, -10.402940566818664,
        ),
        BenchmarkEntry(
            "f8", "shekel10", 4, box(0, 10, 4),
            shekel10, -10.5364, -10.536409816692023,
        ),
        BenchmarkEntry(
            "f9", "shubert", 2, box(-10, 10, 2),
            shubert, -186.73, -186.7309088310239,
        ),
        BenchmarkEntry("f10", "rastrigin", 30, box(-5.12, 5.12, 30), rastrigin, 0.0, 0.0),
        BenchmarkEntry("f11", "ackley", 30, box(-32, 32, 30), ackley, 0.0, 0.0),
        BenchmarkEntry("f12", "griewank", 30, box(-600, 600, 30), griewank, 0.0, 0.0),
        BenchmarkEntry("f13", "penalized1", 30, box(-50, 50, 30), penalized1, 0.0, 0.0),
        BenchmarkEntry("f14", "penalized2", 30, box(-50, 50, 30), penalized2, 0.0, 0.0),
    ]


def registry() -> list[BenchmarkEntry]:
    """All 14 entries, in id order, built fresh on every call."""
    return _entries()


def function_ids() -> list[str]:
    return [e.id for e in _entries()]


def lookup(key: str) -> BenchmarkEntry:
    """Resolve an entry by id ('f10') or by name ('rastrigin')."""
    key = key.strip().lower()
    for entry in _entries():
        if key in (entry.id, entry.name):
            return entry
    raise KeyError(f"unknown benchmark function: {key!r}")


# --- minimum verification ------------------------------------------------

@dataclass
class MinimumCheck:
    """Oracle audit of one registry entry."""

    id: str
    name: str
    dims: int
    oracle_minimum: float
    oracle_argmin: np.ndarray
    canonical_minimum: float
    reference_minimum: float
    evaluations: int
    ok: bool
    note: str = ""


def verify_minima(
    entries: list[BenchmarkEntry] | None = None,
    oracle_budget: int = 250_000,
    tolerance: float = 1e-3,
) -> list[MinimumCheck]:
    """Audit registry minima with the independent search oracle.

    For every entry, minimize with a dense-grid scan (2-D) or multistart
    coordinate refinement (higher dimensions) and compare against the stored
    canonical minimum.  An entry fails (ok=False) when the oracle cannot get
    within ``tolerance`` of it.  A reference value that disagrees with the
    verified minimum is reported in the note, never silently resolved.
    """
    if oracle_budget < 10_000:
        raise ValueError("oracle_budget must allow at least 10_000 evaluations")
    checks = []
    for entry in entries if entries is not None else registry():
        objective = entry.objective()
        x, value = oracle.find_minimum(
            objective.evaluate_many, entry.space, budget=oracle_budget
        )
        ok = abs(value - entry.canonical_minimum) <= tolerance
        note = ""
        if not ok:
            note = "oracle failed to reach the canonical minimum"
        elif abs(entry.canonical_minimum - entry.reference_minimum) > tolerance:
            note = (
                "documented discrepancy: the circulated reference value "
                f"{entry.reference_minimum:g} does not match the verified "
                f"minimum {entry.canonical_minimum:g}"
            )
        checks.append(
            MinimumCheck(
                id=entry.id,
                name=entry.name,
                dims=entry.dims,
                oracle_minimum=float(value),
                oracle_argmin=x,
                canonical_minimum=entry.canonical_minimum,
                reference_minimum=entry.reference_minimum,
                evaluations=objective.evaluations,
                ok=ok,
                note=note,
            )
        )
    return checks
