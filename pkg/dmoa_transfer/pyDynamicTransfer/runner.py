"""One experiment cell: an optimizer tracking a dynamic problem through its environments."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from .const import (
    CHANGE_TOLERANCE,
    DEFAULT_BOOSTING_ROUNDS,
    DEFAULT_POPULATION_SIZE,
    DEFAULT_TARGET_COUNT,
    DEFAULT_TEST_COUNT,
    INITIAL_GENERATIONS,
    NOISE_SCALE,
    REGION_MARGIN,
    SENTINEL_FRACTION,
    ChangeDetection,
    SamplingRegion,
    Variant,
)
from .exceptions import ContractViolation
from .metrics import EnvironmentRecord, RunReport, igd, maximum_spread
from .optimizer import (
    OptimizationResult,
    OptimizerConfig,
    budget_for_environment,
    get_optimizer,
)
from .pareto import Individual, make_population, stack_decisions, stack_objectives
from .problems import DynamicProblem, TimeController, get_problem
from .seeder import predict_initial_population
from .svr import SvrLearner
from .transfer import TransferBooster, build_training_set

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunSettings:
    """Everything a cell needs besides (problem, setting, seed, variant)."""

    population_size: int = DEFAULT_POPULATION_SIZE
    boosting_rounds: int = DEFAULT_BOOSTING_ROUNDS
    target_count: int = DEFAULT_TARGET_COUNT
    test_count: int = DEFAULT_TEST_COUNT
    optimizer: str = "nsga2"
    initial_generations: int = INITIAL_GENERATIONS
    changes: int | None = None
    change_detection: ChangeDetection = ChangeDetection.SCHEDULE
    igd_squared: bool = False
    noise_scale: float = NOISE_SCALE
    sampling_region: SamplingRegion = SamplingRegion.POPULATION
    region_margin: float = REGION_MARGIN
    svr: dict = field(default_factory=dict)
    operators: dict = field(default_factory=dict)
    dimensions: dict = field(default_factory=dict)

    def changes_for(self, n_t: int) -> int:
        """Environment changes per run, 3 * n_t unless overridden."""
        return self.changes if self.changes is not None else 3 * n_t

    def optimizer_config(self, generations: int) -> OptimizerConfig:
        """Optimizer settings for one environment's budget."""
        return OptimizerConfig(
            population_size=self.population_size,
            generations=generations,
            **self.operators,
        )


@dataclass(frozen=True)
class Cell:
    """Coordinates of one run in the experiment grid."""

    problem: str
    tau_t: int
    n_t: int
    seed: int
    variant: Variant

    @property
    def name(self) -> str:
        """File-safe identifier."""
        return f"{self.problem}_{self.tau_t}_{self.n_t}_{self.seed}_{self.variant.value}"


def detect_change(
    pop: Sequence[Individual],
    problem: DynamicProblem,
    t_new: float,
    rng: np.random.Generator,
) -> bool:
    """Re-evaluate a ceil(10%) sentinel panel under t_new and compare to stored objectives."""
    if not pop:
        raise ContractViolation("cannot detect a change on an empty population")
    count = sentinel_count(len(pop))
    panel = rng.choice(len(pop), size=count, replace=False)
    stored = stack_objectives([pop[i] for i in panel])
    fresh = problem.evaluate_many(stack_decisions([pop[i] for i in panel]), t_new)
    return bool(np.any(np.abs(fresh - stored) > CHANGE_TOLERANCE))


def sentinel_count(population_size: int) -> int:
    """Size of the change-detection panel."""
    return max(1, math.ceil(SENTINEL_FRACTION * population_size))


class CellRunner:
    """Runs the initial environment and every subsequent change for one cell."""

    def __init__(self, settings: RunSettings | None = None) -> None:
        """Create a runner; the optimizer name is resolved immediately."""
        self.settings = settings or RunSettings()
        self._optimizer = get_optimizer(self.settings.optimizer)
        self._booster = TransferBooster(
            self.settings.boosting_rounds, SvrLearner(**self.settings.svr)
        )

    def run(self, cell: Cell) -> RunReport:
        """Track the problem through 1 + changes environments and report each one."""
        settings = self.settings
        rng = np.random.default_rng(cell.seed)
        problem = get_problem(
            cell.problem, settings.dimensions.get(cell.problem), seed=cell.seed
        )
        N = settings.population_size
        report = RunReport(cell.problem, cell.tau_t, cell.n_t, cell.seed, cell.variant.value)
        _LOGGER.info("Starting cell %s", cell.name)

        start = make_population(problem.sample_uniform(N, rng), t=0.0)
        result = self._optimizer.optimize(
            start, problem, 0.0, settings.optimizer_config(settings.initial_generations), rng
        )
        report.records.append(self._record(problem, 0, 0.0, result, 0, 0))

        clock = TimeController(n_t=cell.n_t, tau_t=cell.tau_t)
        for env_index in range(1, settings.changes_for(cell.n_t) + 1):
            t = clock.advance(cell.tau_t)
            extra = 0
            variant = cell.variant
            if settings.change_detection is ChangeDetection.SENTINEL:
                extra = sentinel_count(N)
                if not detect_change(result.population, problem, t, rng):
                    # undetected change: the population carries over untouched
                    _LOGGER.warning("%s: change to t=%s not detected", cell.name, t)
                    variant = Variant.PLAIN
            init_pop, transfer_evals = self._initial_population(
                variant, result.population, problem, t, rng
            )
            budget = budget_for_environment(cell.tau_t, initial=False)
            result = self._optimizer.optimize(
                init_pop, problem, t, settings.optimizer_config(budget), rng
            )
            report.records.append(
                self._record(problem, env_index, t, result, transfer_evals, extra)
            )

        _LOGGER.info(
            "Finished cell %s: MIGD %.5f, MS %.4f", cell.name, report.migd, report.mean_ms
        )
        return report

    def _initial_population(
        self,
        variant: Variant,
        previous: list[Individual],
        problem: DynamicProblem,
        t: float,
        rng: np.random.Generator,
    ) -> tuple[list[Individual], int]:
        settings = self.settings
        if variant is Variant.PLAIN:
            return previous, 0
        if variant is Variant.RANDOM_RESTART:
            return make_population(problem.sample_uniform(settings.population_size, rng), t=t), 0
        region = carry = None
        if settings.sampling_region is SamplingRegion.POPULATION:
            carry = stack_decisions(previous)
            region = problem.region_around(carry, settings.region_margin)
        samples = build_training_set(
            previous, problem, t, settings.target_count, rng, region=region
        )
        ensemble = self._booster.train(samples)
        init_pop = predict_initial_population(
            ensemble,
            problem,
            settings.population_size,
            settings.test_count,
            rng,
            noise_scale=settings.noise_scale,
            t=t,
            region=region,
            carry=carry,
        )
        return init_pop, settings.target_count

    def _record(
        self,
        problem: DynamicProblem,
        env_index: int,
        t: float,
        result: OptimizationResult,
        transfer_evals: int,
        extra_evals: int,
    ) -> EnvironmentRecord:
        F = stack_objectives(result.population)
        return EnvironmentRecord(
            env_index=env_index,
            t=t,
            igd=igd(problem.reference_front(t), F, squared=self.settings.igd_squared),
            ms=maximum_spread(problem.true_extremes(t), F),
            evals_used=result.evaluations + transfer_evals + extra_evals,
            generations=result.generations,
            transfer_evals=transfer_evals,
        )


def run_cell(cell: Cell, settings: RunSettings | None = None) -> RunReport:
    """Run one cell with the given settings."""
    return CellRunner(settings).run(cell)
