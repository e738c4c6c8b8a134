"""Tests for the dynamic benchmark problems and the environment clock."""

from __future__ import annotations

import math

import numpy as np
import pytest

from dmoa_transfer.pyDynamicTransfer.const import ChangeType
from dmoa_transfer.pyDynamicTransfer.exceptions import (
    ContractViolation,
    DomainError,
    UnknownProblem,
)
from dmoa_transfer.pyDynamicTransfer.problems import (
    DMOP3,
    FDA1,
    FDA4,
    PROBLEMS,
    TimeController,
    evaluate,
    get_problem,
    sample_true_pof,
    time_of_generation,
)

TIMES = [0.0, 0.1, 0.5, 1.3, 2.0]


class TestTimeController:
    """Environment time from the generation counter."""

    @pytest.mark.parametrize(
        ("tau", "tau_t", "n_t", "expected"),
        [(25, 5, 10, 0.5), (0, 5, 10, 0.0), (9, 10, 10, 0.0)],
    )
    def test_time_of_generation(self, tau, tau_t, n_t, expected):
        """t = floor(tau / tau_t) / n_t."""
        assert time_of_generation(TimeController(n_t, tau_t, tau)) == expected

    def test_time_is_monotone_and_piecewise_constant(self):
        """t never decreases and only changes every tau_t generations."""
        ctrl = TimeController(n_t=10, tau_t=5)
        times = [ctrl.t]
        for _ in range(60):
            times.append(ctrl.advance())
        assert all(b >= a for a, b in zip(times, times[1:]))
        for start in range(0, 60, 5):
            assert len(set(times[start : start + 5])) == 1

    def test_advance_by_window(self):
        """Advancing tau_t generations moves to the next environment."""
        ctrl = TimeController(n_t=10, tau_t=5)
        assert ctrl.advance(5) == pytest.approx(0.1)
        assert ctrl.environment_index == 1

    @pytest.mark.parametrize(("n_t", "tau_t"), [(0, 5), (10, 0)])
    def test_invalid_parameters(self, n_t, tau_t):
        """Non-positive severity or frequency is rejected."""
        with pytest.raises(ContractViolation):
            TimeController(n_t, tau_t)


class TestFDA1:
    """Hand-evaluated FDA1 points."""

    def test_middle_point_at_t0(self, fda1):
        """x = (0.5, 0, ..., 0) at t = 0 gives (0.5, 1 - sqrt(0.5))."""
        x = np.zeros(20)
        x[0] = 0.5
        assert evaluate(fda1, x, 0.0) == pytest.approx([0.5, 1 - math.sqrt(0.5)])

    def test_origin_at_t0(self, fda1):
        """x = 0 at t = 0 gives the front boundary (0, 1)."""
        assert evaluate(fda1, np.zeros(20), 0.0) == pytest.approx([0.0, 1.0])

    def test_tail_on_moving_optimum(self, fda1):
        """Tail variables at G(0.5) = sin(pi/4) give g = 1."""
        x = np.full(20, math.sin(0.25 * math.pi))
        x[0] = 0.25
        assert evaluate(fda1, x, 0.5) == pytest.approx([0.25, 0.5])

    def test_out_of_bounds_names_dimension(self, fda1):
        """The first violating variable is reported."""
        x = np.zeros(20)
        x[3] = 1.5
        with pytest.raises(DomainError) as err:
            fda1.evaluate(x, 0.0)
        assert err.value.dimension == 3
        assert err.value.value == 1.5
        assert err.value.bounds == (-1.0, 1.0)

    def test_negative_time_rejected(self, fda1):
        """Environment time must be non-negative."""
        with pytest.raises(ContractViolation):
            fda1.evaluate(np.zeros(20), -0.1)

    def test_wrong_dimension_rejected(self, fda1):
        """Decision vectors must have n entries."""
        with pytest.raises(ContractViolation):
            fda1.evaluate(np.zeros(5), 0.0)


class TestTrueFront:
    """Analytic Pareto front samplers."""

    def test_fda1_three_points(self, fda1):
        """A three-point grid hits both ends and the middle."""
        expected = [[0.0, 1.0], [0.5, 1 - math.sqrt(0.5)], [1.0, 0.0]]
        assert sample_true_pof(fda1, 0.7, 3) == pytest.approx(np.array(expected))

    @pytest.mark.parametrize("name", [n for n, cls in PROBLEMS.items() if cls.m == 2])
    def test_two_points_are_extremes(self, name):
        """count = 2 returns the first and last grid points."""
        problem = get_problem(name)
        front = problem.sample_true_pof(0.3, 2)
        assert front.shape == (2, problem.m)
        reference = problem.reference_front(0.3)
        np.testing.assert_allclose(front[0], reference[0], atol=1e-12)
        np.testing.assert_allclose(front[-1], reference[-1], atol=1e-12)

    def test_fda4_on_unit_sphere(self):
        """FDA4 front points satisfy f1^2 + f2^2 + f3^2 = 1."""
        front = sample_true_pof(FDA4(), 0.4, 49)
        assert front.shape == (49, 3)
        np.testing.assert_allclose((front**2).sum(axis=1), 1.0, atol=1e-9)

    @pytest.mark.parametrize(
        "name", [n for n, cls in PROBLEMS.items() if cls.change_type is ChangeType.TYPE_I]
    )
    def test_type_one_front_is_static(self, name):
        """Type I fronts do not move with t."""
        problem = get_problem(name)
        base = problem.reference_front(0.0)
        for t in TIMES:
            np.testing.assert_allclose(problem.reference_front(t), base, atol=1e-12)

    def test_reference_front_sizes(self):
        """500 points for two objectives, a 32 x 32 grid for three."""
        assert get_problem("FDA1").reference_front(0.0).shape == (500, 2)
        assert get_problem("FDA5").reference_front(0.0).shape == (1024, 3)

    def test_count_below_two_rejected(self, fda1):
        """A front sample needs at least two points."""
        with pytest.raises(ContractViolation):
            fda1.sample_true_pof(0.0, 1)

    def test_true_extremes(self, fda1):
        """FDA1 objectives both span [0, 1] on the front."""
        low, high = fda1.true_extremes(0.0)
        assert low == pytest.approx([0.0, 0.0])
        assert high == pytest.approx([1.0, 1.0])


class TestRegion:
    """Sampling regions around a set of decision vectors."""

    def test_span_widened_and_clipped(self, small_fda1):
        """The span grows by margin * range per side but never leaves the box."""
        X = np.array([[0.5, -0.2, 0.0, 0.9, -1.0], [0.6, 0.2, 0.0, 0.95, -0.9]])
        lower, upper = small_fda1.region_around(X, 0.1)
        np.testing.assert_allclose(lower, [0.4, -0.4, -0.2, 0.7, -1.0])
        np.testing.assert_allclose(upper, [0.7, 0.4, 0.2, 1.0, -0.7])

    def test_samples_inside_region(self, small_fda1, rng):
        """Uniform samples respect a given region."""
        region = (np.full(5, 0.1), np.full(5, 0.3))
        X = small_fda1.sample_uniform(200, rng, region)
        assert np.all(X >= 0.1) and np.all(X <= 0.3)

    def test_negative_margin(self, small_fda1, rng):
        """The margin cannot shrink the span."""
        with pytest.raises(ContractViolation):
            small_fda1.region_around(small_fda1.sample_uniform(3, rng), -0.1)


class TestOptimalSet:
    """Pareto set samples map onto the Pareto front."""

    @pytest.mark.parametrize("name", list(PROBLEMS))
    @pytest.mark.parametrize("t", TIMES)
    def test_pos_lands_on_pof(self, name, t, rng):
        """Evaluating POS samples gives points on the analytic front."""
        problem = get_problem(name)
        X = problem.sample_true_pos(t, 40, rng)
        F = problem.evaluate_many(X, t)
        reference = problem.sample_true_pof(t, 2000 if problem.m == 2 else 4900)
        nearest = np.min(np.linalg.norm(F[:, None, :] - reference[None, :, :], axis=2), axis=1)
        assert nearest.max() < 0.05

    @pytest.mark.parametrize("name", ["FDA2", "dMOP1"])
    def test_type_three_pos_is_fixed(self, name, rng):
        """A POS sample at t = 0 stays Pareto-optimal at later times."""
        problem = get_problem(name)
        X = problem.sample_true_pos(0.0, 30, rng)
        later = problem.sample_true_pos(1.3, 30, np.random.default_rng(12345))
        np.testing.assert_array_equal(X, later)
        for t in TIMES:
            F = problem.evaluate_many(X, t)
            front = problem._front(F[:, :1], t)
            np.testing.assert_allclose(F, front, atol=1e-12)


class TestRegistry:
    """Problem lookup and construction."""

    @pytest.mark.parametrize(
        ("name", "n", "m", "change_type"),
        [
            ("FDA1", 20, 2, ChangeType.TYPE_I),
            ("FDA2", 31, 2, ChangeType.TYPE_III),
            ("FDA3", 30, 2, ChangeType.TYPE_II),
            ("FDA4", 12, 3, ChangeType.TYPE_I),
            ("FDA5", 12, 3, ChangeType.TYPE_II),
            ("dMOP1", 10, 2, ChangeType.TYPE_III),
            ("dMOP2", 10, 2, ChangeType.TYPE_II),
            ("dMOP3", 10, 2, ChangeType.TYPE_I),
        ],
    )
    def test_defaults(self, name, n, m, change_type):
        """Dimensions, objective counts and change types."""
        problem = get_problem(name)
        assert (problem.n, problem.m, problem.change_type) == (n, m, change_type)
        assert np.all(problem.lower < problem.upper)

    def test_case_insensitive(self):
        """Names match regardless of case."""
        assert get_problem("dmop2").name == "dMOP2"

    def test_dimension_override(self):
        """n can be overridden."""
        assert get_problem("FDA1", n=5).n == 5

    def test_unknown(self):
        """Unregistered names raise UnknownProblem."""
        with pytest.raises(UnknownProblem):
            get_problem("ZDT1")

    def test_bounds_are_read_only(self, fda1):
        """Problems are immutable after construction."""
        with pytest.raises(ValueError):
            fda1.lower[0] = 5.0

    @pytest.mark.parametrize("name", list(PROBLEMS))
    def test_evaluate_is_pure(self, name, rng):
        """Repeated evaluation agrees bitwise."""
        problem = get_problem(name)
        X = problem.sample_uniform(20, rng)
        np.testing.assert_array_equal(problem.evaluate_many(X, 0.4), problem.evaluate_many(X, 0.4))
        assert np.all(np.isfinite(problem.evaluate_many(X, 0.4)))


class TestDMOP3:
    """Seeded position index."""

    def test_index_depends_only_on_seed_and_time(self):
        """Same (seed, t) gives the same index."""
        a, b = DMOP3(seed=3), DMOP3(seed=3)
        assert [a.position_index(t) for t in TIMES] == [b.position_index(t) for t in TIMES]

    def test_index_in_range(self):
        """The moving index is a valid variable."""
        problem = DMOP3(seed=1)
        assert all(0 <= problem.position_index(t / 10) < problem.n for t in range(30))

    def test_distance_carries_factor_nine(self):
        """g = 1 + 9 * sum of squared tail offsets from G(t)."""
        problem, t = DMOP3(seed=2), 0.2
        x = np.full(problem.n, abs(math.sin(0.5 * math.pi * t)) + 0.1)
        x[problem.position_index(t)] = 0.25
        g = 1.0 + 9.0 * (problem.n - 1) * 0.01
        f = problem.evaluate_many(x[None, :], t)[0]
        assert f[0] == pytest.approx(0.25)
        assert f[1] == pytest.approx(g * (1.0 - math.sqrt(0.25 / g)))


def test_fda1_is_default_instance(fda1):
    """Fixture sanity."""
    assert isinstance(fda1, FDA1)
