import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from emopt import benchmarks
from emopt.core import ObjectiveSpec, Population, SearchSpace, make_rng
from emopt.engine import (
    EmoParams,
    compute_charges,
    compute_forces,
    initialize,
    local_search,
    move,
    run_emo,
)


class ScriptedRng:
    """Test double feeding predetermined uniforms to the engine."""

    def __init__(self, blocks):
        self.blocks = [np.asarray(b, dtype=float) for b in blocks]

    def random(self, size=None):
        block = self.blocks.pop(0)
        expected = tuple(np.atleast_1d(size)) if size is not None else ()
        assert block.shape == tuple(expected), f"draw shape {block.shape} != {expected}"
        return block.copy()


def parabola_objective(lo=0.0, hi=1.0):
    space = SearchSpace(np.array([lo]), np.array([hi]))
    return ObjectiveSpec(
        name="parabola",
        dims=1,
        space=space,
        evaluator=lambda xs: (xs[:, 0] - 0.0) ** 2,
    )


def make_population(positions, objective):
    positions = np.asarray(positions, dtype=float)
    return Population(positions, objective.evaluate_many(positions))


class TestEmoParams:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(population_size=1),
            dict(local_search_iters=0),
            dict(local_search_delta=0.0),
            dict(local_search_delta=1.0),
            dict(max_iterations=-1),
            dict(stagnation_tolerance=0.0),
            dict(stagnation_window=0),
            dict(lambda_scope="per-run"),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            EmoParams(**kwargs)

    def test_paper_defaults(self):
        params = EmoParams()
        assert params.population_size == 50
        assert params.local_search_iters == 4
        assert params.local_search_delta == 0.001
        assert params.stagnation_tolerance == 1e-4


class TestInitialize:
    def test_branin_box_membership(self):
        entry = benchmarks.lookup("f1")
        objective = entry.objective()
        pop = initialize(entry.space, 50, make_rng(0), objective)
        assert len(pop) == 50
        assert ((pop.positions >= entry.space.lower) & (pop.positions <= entry.space.upper)).all()
        assert objective.evaluations == 50

    def test_seed_reuse_reproduces(self):
        entry = benchmarks.lookup("f1")
        a = initialize(entry.space, 10, make_rng(9), entry.objective())
        b = initialize(entry.space, 10, make_rng(9), entry.objective())
        assert_array_equal(a.positions, b.positions)
        assert_array_equal(a.fitness, b.fitness)

    def test_two_member_argmin(self):
        objective = parabola_objective()
        pop = initialize(objective.space, 2, make_rng(4), objective)
        assert pop.best_index == int(np.argmin(pop.fitness))


class TestLocalSearch:
    def test_single_attempt_budget_is_noop(self):
        # local_search_iters=1 leaves zero perturbation attempts.
        objective = parabola_objective()
        pop = make_population([[0.5], [0.9]], objective)
        out = local_search(pop, EmoParams(local_search_iters=1), make_rng(0), objective)
        assert_array_equal(out.positions, pop.positions)

    def test_scripted_trace(self):
        # One coordinate, two particles; particle 0 follows the scripted
        # draws: sign draw 0.3 -> negative direction, first step scale 0.5
        # with step length delta*span = 0.1 -> 0.8 - 0.05 = 0.75, improves,
        # accepted, attempts for that coordinate end.  Particle 1 sits at the
        # optimum so every trial is rejected.
        objective = parabola_objective()
        pop = make_population([[0.8], [0.0]], objective)
        rng = ScriptedRng(
            [
                [0.3, 0.9],  # sign draws for coordinate 0
                [0.5, 0.5],  # attempt 1 scales
                [0.1, 0.2],  # attempt 2 scales (particle 0 already done)
                [0.7, 0.9],  # attempt 3 scales
            ]
        )
        params = EmoParams(local_search_iters=4, local_search_delta=0.1)
        out = local_search(pop, params, rng, objective)
        assert out.positions[0, 0] == pytest.approx(0.75)
        assert out.fitness[0] == pytest.approx(0.5625)
        assert out.positions[1, 0] == 0.0

    def test_never_worsens_over_1000_seeds(self):
        objective = parabola_objective()
        params = EmoParams(local_search_iters=4, local_search_delta=0.01)
        for seed in range(1000):
            pop = make_population([[0.5], [0.9]], objective)
            out = local_search(pop, params, make_rng(seed), objective)
            assert out.fitness[0] <= 0.25
            assert out.fitness[1] <= 0.81

    def test_trial_points_clamped(self):
        objective = parabola_objective()
        pop = make_population([[1.0], [0.999999]], objective)
        out = local_search(
            pop, EmoParams(local_search_delta=0.5), make_rng(1), objective
        )
        assert (out.positions >= 0.0).all() and (out.positions <= 1.0).all()


class TestCharges:
    def test_best_particle_charge_one(self):
        objective = parabola_objective()
        pop = compute_charges(make_population([[0.1], [0.5], [0.9]], objective))
        assert pop.charges[pop.best_index] == 1.0

    def test_two_particle_arithmetic(self):
        # Gaps {0, 1}: denominator 1, worse particle exp(-1).
        objective = parabola_objective()
        pop = compute_charges(make_population([[0.0], [1.0]], objective))
        assert pop.charges[0] == 1.0
        assert pop.charges[1] == pytest.approx(math.exp(-1.0))

    def test_all_equal_fitness_degenerates_to_ones(self):
        space = SearchSpace(np.array([0.0]), np.array([1.0]))
        objective = ObjectiveSpec("flat", 1, space, lambda xs: np.zeros(len(xs)))
        pop = compute_charges(make_population([[0.1], [0.5], [0.9]], objective))
        assert_array_equal(pop.charges, np.ones(3))

    def test_bounds_hold_on_random_populations(self):
        entry = benchmarks.lookup("f10")
        rng = make_rng(2)
        for _ in range(50):
            pop = compute_charges(initialize(entry.space, 20, rng, entry.objective()))
            assert (pop.charges > 0).all() and (pop.charges <= 1).all()
            ties = pop.fitness == pop.best_fitness
            assert_array_equal(pop.charges == 1.0, ties)

    def test_nonfinite_fitness_rejected(self):
        pop = Population(np.zeros((2, 1)), np.array([0.0, np.inf]))
        with pytest.raises(ValueError):
            compute_charges(pop)


def pairwise_force(p_pos, p_fit, p_q, h_pos, h_fit, h_q):
    """Independent scalar oracle for one pair's contribution."""
    gap = h_pos - p_pos
    dist2 = float(np.dot(gap, gap))
    if dist2 == 0.0:
        return np.zeros_like(gap)
    if h_fit < p_fit:
        return gap * p_q * h_q / dist2
    return -gap * p_q * h_q / dist2


class TestForces:
    def test_worse_particle_attracted(self):
        objective = parabola_objective()
        pop = compute_charges(make_population([[0.2], [0.9]], objective))
        forces = compute_forces(pop)
        # Particle 1 is worse; its force points toward particle 0.
        assert forces[1].components[0] < 0
        assert forces[1].normalized[0] == -1.0

    def test_collinear_triplet_matches_pairwise_oracle(self):
        objective = parabola_objective()
        pop = compute_charges(make_population([[0.0], [0.5], [1.0]], objective))
        forces = compute_forces(pop)
        for p in range(3):
            expected = sum(
                pairwise_force(
                    pop.positions[p], pop.fitness[p], pop.charges[p],
                    pop.positions[h], pop.fitness[h], pop.charges[h],
                )
                for h in range(3)
                if h != p
            )
            assert_allclose(forces[p].components, expected, rtol=1e-12)
        # Middle particle: attraction to 0.0 plus repulsion from 1.0, both -x.
        assert forces[1].components[0] < 0

    def test_coincident_pair_contributes_zero(self):
        objective = parabola_objective()
        pop = compute_charges(make_population([[0.4], [0.4], [0.9]], objective))
        forces = compute_forces(pop)
        assert np.isfinite(forces[0].components).all()
        # Twins only feel the third particle.
        assert forces[0].components[0] == pytest.approx(forces[1].components[0])

    def test_unit_norm_or_zero(self):
        entry = benchmarks.lookup("f5")
        rng = make_rng(8)
        for _ in range(20):
            pop = compute_charges(initialize(entry.space, 15, rng, entry.objective()))
            for force in compute_forces(pop):
                norm = np.linalg.norm(force.normalized)
                assert norm == pytest.approx(1.0, abs=1e-9) or norm == 0.0

    def test_requires_charges(self):
        objective = parabola_objective()
        with pytest.raises(ValueError):
            compute_forces(make_population([[0.1], [0.2]], objective))


class TestMove:
    def test_best_particle_stationary(self):
        entry = benchmarks.lookup("f1")
        objective = entry.objective()
        pop = compute_charges(initialize(entry.space, 20, make_rng(5), objective))
        before = pop.best_position.copy()
        out = move(pop, compute_forces(pop), make_rng(6), objective)
        assert_array_equal(out.positions[pop.best_index], before)

    def test_zero_force_leaves_particle(self):
        objective = parabola_objective()
        pop = make_population([[0.5], [0.2]], objective)
        forces = np.array([[0.0], [0.0]])
        out = move(pop, forces, make_rng(0), objective)
        assert_array_equal(out.positions, pop.positions)

    def test_scripted_step_arithmetic(self):
        # unit force +1, lambda 0.5 from x=0.5: 0.5 + 0.5 * 1 * (1 - 0.5) = 0.75.
        objective = parabola_objective()
        pop = make_population([[0.5], [0.0]], objective)  # particle 1 is best
        forces = np.array([[1.0], [0.0]])
        rng = ScriptedRng([[0.5, 0.123]])  # per-particle scale draws
        out = move(pop, forces, rng, objective, lambda_scope="per-particle")
        assert out.positions[0, 0] == pytest.approx(0.75)

    def test_feasibility_by_construction(self):
        entry = benchmarks.lookup("f9")
        objective = entry.objective()
        rng = make_rng(13)
        pop = compute_charges(initialize(entry.space, 30, rng, objective))
        for _ in range(5):
            pop = move(pop, compute_forces(pop), rng, objective)
            assert ((pop.positions >= entry.space.lower) & (pop.positions <= entry.space.upper)).all()
            pop = compute_charges(pop)

    def test_lambda_scope_validated(self):
        objective = parabola_objective()
        pop = make_population([[0.5], [0.0]], objective)
        with pytest.raises(ValueError):
            move(pop, np.zeros((2, 1)), make_rng(0), objective, lambda_scope="bogus")


class TestRunEmo:
    def test_zero_iteration_cap(self):
        entry = benchmarks.lookup("f1")
        record = run_emo(entry.objective(), EmoParams(max_iterations=0), 3)
        assert record.iterations == 0
        assert record.evaluations == 50
        assert record.trace.size == 0
        assert record.termination == "max_iterations"

    def test_degenerate_target_stops_first_iteration(self):
        entry = benchmarks.lookup("f1")
        record = run_emo(
            entry.objective(), EmoParams(target_value=float("inf")), 3
        )
        assert record.iterations == 1
        assert record.termination == "target"

    def test_trace_is_monotone_nonincreasing(self):
        entry = benchmarks.lookup("f6")
        record = run_emo(entry.objective(), EmoParams(max_iterations=60), 21)
        assert (np.diff(record.trace) <= 0).all()

    def test_identical_seeds_identical_records(self):
        entry = benchmarks.lookup("f2")
        params = EmoParams(max_iterations=40)
        a = run_emo(entry.objective(), params, 77)
        b = run_emo(entry.objective(), params, 77)
        assert_array_equal(a.best_position, b.best_position)
        assert_array_equal(a.trace, b.trace)
        assert a.best_fitness == b.best_fitness
        assert a.iterations == b.iterations
        assert a.evaluations == b.evaluations

    def test_stagnation_termination_reported(self):
        entry = benchmarks.lookup("f1")
        record = run_emo(entry.objective(), EmoParams(), 1)
        assert record.termination == "stagnation"
        assert record.iterations >= EmoParams().stagnation_window

    def test_final_best_matches_trace_tail(self):
        entry = benchmarks.lookup("f3")
        record = run_emo(entry.objective(), EmoParams(max_iterations=30), 5)
        assert record.best_fitness == record.trace[-1]
