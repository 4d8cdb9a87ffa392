"""Shared domain model: bounded search spaces, particle populations, objectives.

All positions are float64 numpy vectors. Objective evaluators are pure and
batch-capable: they accept a (k, n) array and return a (k,) array of values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "SearchSpace",
    "Particle",
    "Population",
    "ObjectiveSpec",
    "RunRecord",
    "clamp_to_box",
    "make_rng",
]


def make_rng(seed) -> np.random.Generator:
    """Seeded uniform stream; the same seed always yields the same draws."""
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class SearchSpace:
    """Axis-aligned box of feasible positions, one [lower, upper] pair per dimension."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.ndim != 1 or upper.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("lower and upper must be 1-D arrays of equal length")
        if lower.size == 0:
            raise ValueError("search space needs at least one dimension")
        if not (np.isfinite(lower).all() and np.isfinite(upper).all()):
            raise ValueError("bounds must be finite")
        if not (lower < upper).all():
            raise ValueError("every dimension needs lower < upper")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def cube(cls, low: float, high: float, dims: int) -> "SearchSpace":
        return cls(np.full(dims, float(low)), np.full(dims, float(high)))

    @property
    def dims(self) -> int:
        return self.lower.size

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool((x >= self.lower).all() and (x <= self.upper).all())

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """count i.i.d. uniform points inside the box, shape (count, dims)."""
        return self.lower + self.span * rng.random((count, self.dims))


def clamp_to_box(space: SearchSpace, x) -> np.ndarray:
    """Project x coordinate-wise into the box. Idempotent."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != space.dims:
        raise ValueError(f"expected {space.dims} coordinates, got {x.shape[-1]}")
    return np.clip(x, space.lower, space.upper)


@dataclass
class Particle:
    """One candidate solution: position, cached objective value, optional charge."""

    position: np.ndarray
    fitness: float
    charge: float | None = None


class Population:
    """Fixed-size collection of particles stored as arrays.

    positions has shape (m, n), fitness shape (m,).  best_index always points
    at the member with minimal fitness (lowest index on ties).  Charges are
    attached by the charge-computation phase and are None before it.
    """

    __slots__ = ("positions", "fitness", "charges", "best_index")

    def __init__(self, positions, fitness, charges=None):
        positions = np.asarray(positions, dtype=float)
        fitness = np.asarray(fitness, dtype=float)
        if positions.ndim != 2:
            raise ValueError("positions must be a (m, n) array")
        if positions.shape[0] < 2:
            raise ValueError("population needs at least 2 members")
        if fitness.shape != (positions.shape[0],):
            raise ValueError("fitness must have one value per member")
        if charges is not None:
            charges = np.asarray(charges, dtype=float)
            if charges.shape != fitness.shape:
                raise ValueError("charges must have one value per member")
        self.positions = positions
        self.fitness = fitness
        self.charges = charges
        self.best_index = int(np.argmin(fitness))

    def __len__(self) -> int:
        return self.positions.shape[0]

    @property
    def dims(self) -> int:
        return self.positions.shape[1]

    @property
    def best_position(self) -> np.ndarray:
        return self.positions[self.best_index]

    @property
    def best_fitness(self) -> float:
        return float(self.fitness[self.best_index])

    @property
    def members(self) -> list[Particle]:
        """Particle views (copies) of all members, in storage order."""
        return [self.particle(i) for i in range(len(self))]

    def particle(self, i: int) -> Particle:
        charge = None if self.charges is None else float(self.charges[i])
        return Particle(self.positions[i].copy(), float(self.fitness[i]), charge)

    def copy(self) -> "Population":
        charges = None if self.charges is None else self.charges.copy()
        return Population(self.positions.copy(), self.fitness.copy(), charges)


@dataclass
class ObjectiveSpec:
    """A named objective over a box, with an evaluation counter.

    evaluator maps a (k, n) array to a (k,) array and must be deterministic.
    Every evaluated point increments `evaluations` by one; counters are
    per-instance, so independent runs get independent accounting.
    """

    name: str
    dims: int
    space: SearchSpace
    evaluator: Callable[[np.ndarray], np.ndarray]
    known_minimum: float | None = None
    evaluations: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.dims != self.space.dims:
            raise ValueError("dims must match the search space")

    def evaluate(self, x) -> float:
        """Objective value at a single feasible point."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dims,):
            raise ValueError(f"{self.name}: expected a vector of length {self.dims}")
        return float(self.evaluate_many(x[None, :])[0])

    def evaluate_many(self, xs) -> np.ndarray:
        """Objective values for a (k, n) batch of feasible points."""
        xs = np.asarray(xs, dtype=float)
        if xs.ndim != 2 or xs.shape[1] != self.dims:
            raise ValueError(f"{self.name}: expected a (k, {self.dims}) array")
        if (xs < self.space.lower).any() or (xs > self.space.upper).any():
            raise ValueError(f"{self.name}: point outside the search box")
        values = np.asarray(self.evaluator(xs), dtype=float)
        if values.shape != (xs.shape[0],):
            raise ValueError(f"{self.name}: evaluator returned shape {values.shape}")
        self.evaluations += xs.shape[0]
        return values


@dataclass
class RunRecord:
    """Outcome of one optimization run.

    trace[k] is the best objective value after iteration k+1; it is
    non-increasing because the incumbent never worsens.
    """

    function: str
    algorithm: str
    best_position: np.ndarray
    best_fitness: float
    iterations: int
    evaluations: int
    trace: np.ndarray
    termination: str
    seed: int | None = None
