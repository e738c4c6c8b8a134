"""Tests for the NSGA-II optimizer and its variation operators."""

from __future__ import annotations

import numpy as np
import pytest

from dmoa_transfer.pyDynamicTransfer.exceptions import ContractViolation, UnknownOptimizer
from dmoa_transfer.pyDynamicTransfer.metrics import igd
from dmoa_transfer.pyDynamicTransfer.optimizer import (
    NSGA2Optimizer,
    OptimizerConfig,
    binary_tournament,
    budget_for_environment,
    get_optimizer,
    optimize,
    polynomial_mutation,
    sbx_crossover,
)
from dmoa_transfer.pyDynamicTransfer.pareto import (
    dominates,
    make_population,
    stack_decisions,
    stack_objectives,
)


def _random_population(problem, N, rng):
    return make_population(problem.sample_uniform(N, rng))


class TestConfig:
    """OptimizerConfig validation."""

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"population_size": 7},
            {"population_size": 0},
            {"generations": 0},
            {"crossover_probability": 1.5},
            {"mutation_probability": -0.1},
        ],
    )
    def test_invalid(self, kwargs):
        """Odd N, zero generations and probabilities outside [0, 1] are rejected."""
        with pytest.raises(ContractViolation):
            OptimizerConfig(**kwargs)

    def test_with_generations(self):
        """Budget can be swapped without touching other settings."""
        cfg = OptimizerConfig(population_size=20, crossover_eta=15).with_generations(5)
        assert (cfg.population_size, cfg.generations, cfg.crossover_eta) == (20, 5, 15)


class TestOperators:
    """Selection and variation."""

    def test_tournament_prefers_rank_then_crowding(self):
        """Lower rank wins; equal ranks go to the larger crowding distance."""
        rank = np.array([0, 1, 0])
        crowding = np.array([1.0, 5.0, np.inf])

        class Pairs:
            def integers(self, high, size):
                return np.array([[0, 1], [1, 0], [0, 2], [2, 0], [1, 1]])

        winners = binary_tournament(rank, crowding, 5, Pairs())
        assert winners.tolist() == [0, 0, 2, 2, 1]

    def test_sbx_keeps_bounds(self, small_fda1, rng):
        """Children are clipped into the box."""
        parents = small_fda1.sample_uniform(40, rng)
        children = sbx_crossover(parents, small_fda1.lower, small_fda1.upper, 2.0, 1.0, rng)
        assert children.shape == parents.shape
        small_fda1.check_bounds(children)

    def test_sbx_identical_parents(self, small_fda1, rng):
        """Crossing a vector with itself reproduces it."""
        parent = small_fda1.sample_uniform(1, rng)
        parents = np.repeat(parent, 4, axis=0)
        children = sbx_crossover(parents, small_fda1.lower, small_fda1.upper, 20.0, 1.0, rng)
        np.testing.assert_allclose(children, parents, atol=1e-12)

    def test_sbx_without_crossover(self, small_fda1, rng):
        """Probability zero passes parents through."""
        parents = small_fda1.sample_uniform(10, rng)
        children = sbx_crossover(parents, small_fda1.lower, small_fda1.upper, 20.0, 0.0, rng)
        np.testing.assert_array_equal(children, parents)

    def test_sbx_recombines_about_half_the_variables(self, fda1, rng):
        """With every pair crossed, each variable is recombined with probability 0.5."""
        parents = fda1.sample_uniform(400, rng)
        children = sbx_crossover(parents, fda1.lower, fda1.upper, 20.0, 1.0, rng)
        changed = np.mean(children != parents)
        assert 0.45 < changed < 0.55

    def test_sbx_swaps_child_values(self, small_fda1, rng):
        """A recombined variable hands its larger child value to either child equally often."""
        p1 = np.full((500, small_fda1.n), 0.2)
        p2 = np.full((500, small_fda1.n), 0.4)
        children = sbx_crossover(
            np.vstack([p1, p2]), small_fda1.lower, small_fda1.upper, 20.0, 1.0, rng
        )
        first, second = children[:500], children[500:]
        recombined = first != p1
        swapped = first > second
        assert 0.4 < np.mean(swapped[recombined]) < 0.6

    def test_mutation_step_shrinks_at_bound(self, small_fda1, rng):
        """A variable sitting on its upper bound can only move down."""
        X = np.tile(small_fda1.upper, (200, 1))
        mutated = polynomial_mutation(X, small_fda1.lower, small_fda1.upper, 20.0, 1.0, rng)
        assert np.all(mutated <= X)
        assert np.any(mutated < X)

    def test_mutation_keeps_bounds(self, small_fda1, rng):
        """Mutated vectors are clipped into the box."""
        X = np.tile(small_fda1.upper, (50, 1))
        mutated = polynomial_mutation(X, small_fda1.lower, small_fda1.upper, 1.0, 1.0, rng)
        small_fda1.check_bounds(mutated)
        assert np.any(mutated != X)

    def test_mutation_probability_zero(self, small_fda1, rng):
        """No variable changes when the rate is zero."""
        X = small_fda1.sample_uniform(10, rng)
        mutated = polynomial_mutation(X, small_fda1.lower, small_fda1.upper, 20.0, 0.0, rng)
        np.testing.assert_array_equal(mutated, X)


class TestNSGA2:
    """Full optimizer runs."""

    def test_one_generation_is_elitist(self, small_fda1, rng):
        """No survivor is dominated by anything discarded from parents plus offspring."""
        N = 20
        init = _random_population(small_fda1, N, rng)
        cfg = OptimizerConfig(population_size=N, generations=1)
        result = NSGA2Optimizer().optimize(init, small_fda1, 0.0, cfg, np.random.default_rng(1))
        F_out = stack_objectives(result.population)
        F_init = small_fda1.evaluate_many(stack_decisions(init), 0.0)
        for f in F_init:
            if not any(np.array_equal(f, g) for g in F_out):
                assert not any(dominates(f, g) for g in F_out)
        assert result.evaluations == 2 * N
        assert result.generations == 1

    def test_output_evaluated_and_in_bounds(self, small_fda1, rng):
        """N evaluated, in-bounds members at the requested time."""
        cfg = OptimizerConfig(population_size=30, generations=5)
        pop = optimize(_random_population(small_fda1, 30, rng), small_fda1, 0.4, cfg, rng)
        assert len(pop) == 30
        small_fda1.check_bounds(stack_decisions(pop))
        F = stack_objectives(pop)
        np.testing.assert_array_equal(F, small_fda1.evaluate_many(stack_decisions(pop), 0.4))
        assert all(ind.t == 0.4 for ind in pop)

    def test_deterministic(self, small_fda1):
        """Same seed, same final population."""
        cfg = OptimizerConfig(population_size=20, generations=5)

        def run():
            rng = np.random.default_rng(9)
            return stack_decisions(
                optimize(_random_population(small_fda1, 20, rng), small_fda1, 0.0, cfg, rng)
            )

        np.testing.assert_array_equal(run(), run())

    def test_starting_on_optimal_set_keeps_quality(self, fda1, rng):
        """A population already on the Pareto set does not lose IGD."""
        reference = fda1.reference_front(0.0)
        init = make_population(fda1.sample_true_pos(0.0, 100, rng))
        before = igd(reference, fda1.evaluate_many(stack_decisions(init), 0.0))
        cfg = OptimizerConfig(population_size=100, generations=5)
        after = igd(reference, stack_objectives(optimize(init, fda1, 0.0, cfg, rng)))
        assert after <= before + 1e-9

    def test_wrong_population_size(self, small_fda1, rng):
        """The initial population must have N members."""
        cfg = OptimizerConfig(population_size=20, generations=1)
        with pytest.raises(ContractViolation):
            optimize(_random_population(small_fda1, 10, rng), small_fda1, 0.0, cfg, rng)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [0, 1, 2, 2024])
    def test_fda1_convergence(self, fda1, seed):
        """FDA1 at t = 0 from random init reaches IGD < 0.05 in 50 generations."""
        rng = np.random.default_rng(seed)
        cfg = OptimizerConfig(population_size=100, generations=50)
        pop = optimize(_random_population(fda1, 100, rng), fda1, 0.0, cfg, rng)
        assert igd(fda1.reference_front(0.0), stack_objectives(pop)) < 0.05


class TestRegistry:
    """Optimizer lookup and budgets."""

    def test_nsga2(self):
        """The default optimizer is registered."""
        assert get_optimizer("NSGA2").name == "nsga2"

    def test_reserved_name(self):
        """rmmeda is reserved but not available."""
        with pytest.raises(UnknownOptimizer, match="not available"):
            get_optimizer("rmmeda")

    def test_unknown(self):
        """Other names are unknown."""
        with pytest.raises(UnknownOptimizer):
            get_optimizer("moead")

    @pytest.mark.parametrize(
        ("tau_t", "initial", "expected"), [(5, True, 50), (5, False, 5), (10, False, 10)]
    )
    def test_budget_for_environment(self, tau_t, initial, expected):
        """Initial environment gets 50 generations, later ones tau_t."""
        assert budget_for_environment(tau_t, initial) == expected

    def test_budget_needs_positive_frequency(self):
        """tau_t must be >= 1."""
        with pytest.raises(ContractViolation):
            budget_for_environment(0, False)
