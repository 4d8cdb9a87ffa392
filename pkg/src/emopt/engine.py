"""Electromagnetism-like optimization engine.

Particles carry fitness-derived charges in (0, 1]; each iteration runs a
stochastic per-coordinate local search, recomputes charges, accumulates
pairwise attraction/repulsion forces, and moves every particle except the
incumbent by a random fraction of its distance to the box boundary.

Random-draw schedule (fixed, so a seed fully determines a run):

* initialization: one (m, n) uniform block;
* local search, per coordinate d: one m-vector for the perturbation signs,
  then ``local_search_iters - 1`` m-vectors of step scales (one per attempt
  round, drawn whether or not a particle is still active);
* movement: one (m, n) uniform block ('per-coordinate' scope) or one
  m-vector ('per-particle' scope).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ObjectiveSpec, Population, RunRecord, SearchSpace, make_rng

__all__ = [
    "EmoParams",
    "ForceVector",
    "initialize",
    "local_search",
    "compute_charges",
    "compute_forces",
    "move",
    "run_emo",
]

LAMBDA_SCOPES = ("per-coordinate", "per-particle")


@dataclass(frozen=True)
class EmoParams:
    """Engine configuration.

    A run stops at the first of: the iteration cap; the best value improving
    by less than ``stagnation_tolerance`` across the last
    ``stagnation_window`` iterations; or, when ``target_value`` is set, the
    best value coming within the tolerance of (or dropping below) it.
    """

    population_size: int = 50
    local_search_iters: int = 4
    local_search_delta: float = 0.001
    max_iterations: int = 2000
    stagnation_tolerance: float = 1e-4
    stagnation_window: int = 10
    target_value: float | None = None
    # One movement step scale per particle keeps the displacement aligned
    # with the force direction; a fresh scale per coordinate scrambles it,
    # which measurably worsens high-dimensional convergence.
    lambda_scope: str = "per-particle"

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if self.local_search_iters < 1:
            raise ValueError("local_search_iters must be at least 1")
        if not 0 < self.local_search_delta < 1:
            raise ValueError("local_search_delta must lie in (0, 1)")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be nonnegative")
        if self.stagnation_tolerance <= 0:
            raise ValueError("stagnation_tolerance must be positive")
        if self.stagnation_window < 1:
            raise ValueError("stagnation_window must be at least 1")
        if self.lambda_scope not in LAMBDA_SCOPES:
            raise ValueError(f"lambda_scope must be one of {LAMBDA_SCOPES}")


@dataclass(frozen=True)
class ForceVector:
    """Total force on one particle and its unit-normalized direction."""

    components: np.ndarray
    normalized: np.ndarray


def initialize(
    space: SearchSpace, m: int, rng: np.random.Generator, objective: ObjectiveSpec
) -> Population:
    """m particles i.i.d. uniform over the box, evaluated."""
    positions = space.sample(rng, m)
    return Population(positions, objective.evaluate_many(positions))


def local_search(
    pop: Population,
    params: EmoParams,
    rng: np.random.Generator,
    objective: ObjectiveSpec,
) -> Population:
    """Per-coordinate stochastic descent with step scale delta * max box span.

    For every particle and coordinate, the perturbation direction is fixed by
    one draw; up to ``local_search_iters - 1`` step attempts follow, each
    with a fresh scale draw, and the first improvement ends the attempts for
    that coordinate.  Trial coordinates are clamped to the box before
    evaluation, so fitness never increases.
    """
    space = objective.space
    positions = pop.positions.copy()
    fitness = pop.fitness.copy()
    m = len(pop)
    length = params.local_search_delta * float(np.max(space.span))
    attempts = params.local_search_iters - 1

    for d in range(pop.dims):
        sign = np.where(rng.random(m) > 0.5, 1.0, -1.0)
        active = np.ones(m, dtype=bool)
        for _ in range(attempts):
            scale = rng.random(m)
            if not active.any():
                continue
            idx = np.flatnonzero(active)
            trial = positions[idx].copy()
            trial[:, d] = np.clip(
                trial[:, d] + sign[idx] * scale[idx] * length,
                space.lower[d],
                space.upper[d],
            )
            trial_fit = objective.evaluate_many(trial)
            improved = trial_fit < fitness[idx]
            winners = idx[improved]
            positions[winners] = trial[improved]
            fitness[winners] = trial_fit[improved]
            active[winners] = False
    return Population(positions, fitness)


def compute_charges(pop: Population) -> Population:
    """Charges q = exp(-n * (f - f_best) / sum(f - f_best)), all in (0, 1].

    The incumbent always gets charge 1.  When every member has equal fitness
    the formula degenerates to 0/0; all charges are then set to 1, which
    keeps the particles symmetric.
    """
    fitness = pop.fitness
    if not np.isfinite(fitness).all():
        raise ValueError("charges require finite fitness values")
    gaps = fitness - pop.best_fitness
    denom = float(gaps.sum())
    if denom == 0.0:
        charges = np.ones(len(pop))
    else:
        charges = np.exp(-pop.dims * gaps / denom)
    return Population(pop.positions.copy(), fitness.copy(), charges)


def compute_forces(pop: Population) -> list[ForceVector]:
    """Superposed pairwise forces, then unit normalization.

    A better neighbor attracts, a worse-or-equal one repels; each pair is
    weighted by the charge product over the squared distance.  Coincident
    pairs contribute nothing (a direction would be undefined).  A zero total
    force normalizes to the zero vector.
    """
    if pop.charges is None:
        raise ValueError("compute_charges must run before compute_forces")
    positions, fitness, charges = pop.positions, pop.fitness, pop.charges
    diff = positions[None, :, :] - positions[:, None, :]  # diff[p, h] = g_h - g_p
    dist2 = np.einsum("phd,phd->ph", diff, diff)
    weight = np.divide(
        charges[:, None] * charges[None, :],
        dist2,
        out=np.zeros_like(dist2),
        where=dist2 > 0.0,
    )
    toward = np.where(fitness[None, :] < fitness[:, None], 1.0, -1.0)
    np.fill_diagonal(toward, 0.0)
    total = np.einsum("ph,phd->pd", weight * toward, diff)
    norms = np.linalg.norm(total, axis=1)
    unit = np.divide(total, norms[:, None], out=np.zeros_like(total), where=norms[:, None] > 0.0)
    return [ForceVector(total[p].copy(), unit[p].copy()) for p in range(len(pop))]


def _normalized_matrix(forces, m: int, n: int) -> np.ndarray:
    if isinstance(forces, np.ndarray):
        matrix = np.asarray(forces, dtype=float)
    else:
        matrix = np.vstack([f.normalized for f in forces])
    if matrix.shape != (m, n):
        raise ValueError(f"expected {m} force vectors of dimension {n}")
    return matrix


def move(
    pop: Population,
    forces,
    rng: np.random.Generator,
    objective: ObjectiveSpec,
    lambda_scope: str = "per-coordinate",
) -> Population:
    """Displace every particle except the incumbent along its force direction.

    Each coordinate moves by a random fraction of the gap to the boundary the
    force points at, which keeps the step feasible by construction (clamping
    is only a rounding backstop).  Moved particles are re-evaluated.
    """
    space = objective.space
    m, n = pop.positions.shape
    unit = _normalized_matrix(forces, m, n)
    if lambda_scope == "per-coordinate":
        lam = rng.random((m, n))
    elif lambda_scope == "per-particle":
        lam = np.repeat(rng.random(m)[:, None], n, axis=1)
    else:
        raise ValueError(f"lambda_scope must be one of {LAMBDA_SCOPES}")

    positions = pop.positions
    room = np.where(unit > 0.0, space.upper[None, :] - positions, positions - space.lower[None, :])
    new_positions = np.clip(positions + lam * unit * room, space.lower, space.upper)
    new_positions[pop.best_index] = positions[pop.best_index]

    fitness = pop.fitness.copy()
    moved = np.flatnonzero(np.any(new_positions != positions, axis=1))
    if moved.size:
        fitness[moved] = objective.evaluate_many(new_positions[moved])
    return Population(new_positions, fitness)


def _stagnated(trace: list[float], initial_best: float, params: EmoParams) -> bool:
    done = len(trace)
    window = params.stagnation_window
    if done < window:
        return False
    earlier = initial_best if done == window else trace[done - window - 1]
    return earlier - trace[-1] < params.stagnation_tolerance


def _reached_target(best: float, params: EmoParams) -> bool:
    # Signed test: also stops if the best value drops below the target.
    return (
        params.target_value is not None
        and best - params.target_value < params.stagnation_tolerance
    )


def drive(
    objective: ObjectiveSpec,
    params: EmoParams,
    rng,
    *,
    algorithm: str = "emo",
    init=initialize,
    after_move=None,
) -> RunRecord:
    """Shared iteration loop; ``after_move`` is the per-iteration hook the
    opposition-based variant plugs into."""
    rng = make_rng(rng)
    evals_before = objective.evaluations
    pop = init(objective.space, params.population_size, rng, objective)
    initial_best = pop.best_fitness
    trace: list[float] = []
    termination = "max_iterations"
    iterations = 0
    while iterations < params.max_iterations:
        pop = local_search(pop, params, rng, objective)
        pop = compute_charges(pop)
        forces = compute_forces(pop)
        pop = move(pop, forces, rng, objective, params.lambda_scope)
        if after_move is not None:
            pop = after_move(pop, rng)
        iterations += 1
        trace.append(pop.best_fitness)
        if _reached_target(pop.best_fitness, params):
            termination = "target"
            break
        if _stagnated(trace, initial_best, params):
            termination = "stagnation"
            break
    return RunRecord(
        function=objective.name,
        algorithm=algorithm,
        best_position=pop.best_position.copy(),
        best_fitness=pop.best_fitness,
        iterations=iterations,
        evaluations=objective.evaluations - evals_before,
        trace=np.asarray(trace),
        termination=termination,
    )


def run_emo(objective: ObjectiveSpec, params: EmoParams, rng) -> RunRecord:
    """One seeded run of the standard algorithm; ``rng`` is a seed or Generator."""
    return drive(objective, params, rng, algorithm="emo")
