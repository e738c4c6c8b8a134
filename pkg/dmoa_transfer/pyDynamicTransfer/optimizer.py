"""Static multi-objective optimizers run for a fixed budget per environment."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, replace
import logging
from typing import Protocol

import numpy as np

from .const import INITIAL_GENERATIONS, PM_ETA, SBX_ETA, SBX_MIN_GAP, SBX_PROBABILITY
from .exceptions import ContractViolation, UnknownOptimizer
from .pareto import (
    Individual,
    environmental_selection,
    make_population,
    rank_and_crowding,
    stack_decisions,
)
from .problems import DynamicProblem

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptimizerConfig:
    """Population size, generation budget and variation operator settings.

    mutation_probability of None means 1/n for the problem being solved.
    """

    population_size: int = 100
    generations: int = INITIAL_GENERATIONS
    crossover_eta: float = SBX_ETA
    mutation_eta: float = PM_ETA
    crossover_probability: float = SBX_PROBABILITY
    mutation_probability: float | None = None

    def __post_init__(self) -> None:
        if self.population_size < 2 or self.population_size % 2:
            raise ContractViolation(
                f"population size must be even and >= 2, got {self.population_size}"
            )
        if self.generations < 1:
            raise ContractViolation(f"generations must be >= 1, got {self.generations}")
        for name in ("crossover_probability", "mutation_probability"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ContractViolation(f"{name} must lie in [0, 1], got {value}")
        if self.crossover_eta < 0 or self.mutation_eta < 0:
            raise ContractViolation("distribution indices must be >= 0")

    def with_generations(self, generations: int) -> OptimizerConfig:
        """Copy with a different generation budget."""
        return replace(self, generations=generations)


@dataclass
class OptimizationResult:
    """Final evaluated population and the true-function evaluations it cost."""

    population: list[Individual]
    evaluations: int
    generations: int


class Optimizer(Protocol):
    """Anything that improves an initial population under F(., t) for cfg.generations."""

    name: str

    def optimize(
        self,
        init_pop: Sequence[Individual],
        problem: DynamicProblem,
        t: float,
        cfg: OptimizerConfig,
        rng: np.random.Generator,
    ) -> OptimizationResult: ...


def binary_tournament(
    rank: np.ndarray, crowding: np.ndarray, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Winners of `count` random pairings: lower rank, then larger crowding, then the first."""
    pairs = rng.integers(len(rank), size=(count, 2))
    a, b = pairs[:, 0], pairs[:, 1]
    second_wins = (rank[b] < rank[a]) | ((rank[b] == rank[a]) & (crowding[b] > crowding[a]))
    return np.where(second_wins, b, a)


def sbx_crossover(
    parents: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    eta: float,
    probability: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Bounded simulated binary crossover of row i with row i + len/2.

    A crossed pair recombines each variable with probability 0.5, using the spread
    factor limited by the distance of both parents to the box edges, and swaps the
    two child values of a recombined variable with probability 0.5.
    """
    half = len(parents) // 2
    p1, p2 = parents[:half], parents[half : 2 * half]
    crossed = (rng.random(half) < probability)[:, None]
    active = crossed & (rng.random(p1.shape) < 0.5) & (np.abs(p1 - p2) > SBX_MIN_GAP)
    y1, y2 = np.minimum(p1, p2), np.maximum(p1, p2)
    gap = np.where(active, y2 - y1, 1.0)
    u = rng.random(p1.shape)

    def spread(beta: np.ndarray) -> np.ndarray:
        alpha = 2.0 - beta ** -(eta + 1.0)
        return np.where(
            u <= 1.0 / alpha,
            (u * alpha) ** (1.0 / (eta + 1.0)),
            (1.0 / (2.0 - u * alpha)) ** (1.0 / (eta + 1.0)),
        )

    low = 0.5 * ((y1 + y2) - spread(1.0 + 2.0 * (y1 - lower) / gap) * gap)
    high = 0.5 * ((y1 + y2) + spread(1.0 + 2.0 * (upper - y2) / gap) * gap)
    swap = rng.random(p1.shape) < 0.5
    c1 = np.where(active, np.where(swap, high, low), p1)
    c2 = np.where(active, np.where(swap, low, high), p2)
    return np.clip(np.vstack([c1, c2]), lower, upper)


def polynomial_mutation(
    X: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    eta: float,
    probability: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Bounded polynomial mutation: the step shrinks as a variable nears its bound."""
    span = upper - lower
    mutate = rng.random(X.shape) < probability
    u = rng.random(X.shape)
    below = u < 0.5
    # one minus the normalized distance to the bound the step heads towards
    xy = 1.0 - np.where(below, (X - lower) / span, (upper - X) / span)
    tail = xy ** (eta + 1.0)
    val = np.where(below, 2.0 * u + (1.0 - 2.0 * u) * tail, 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * tail)
    delta = np.where(
        below, val ** (1.0 / (eta + 1.0)) - 1.0, 1.0 - val ** (1.0 / (eta + 1.0))
    )
    return np.clip(np.where(mutate, X + delta * span, X), lower, upper)


class NSGA2Optimizer:
    """Elitist (mu + lambda) non-dominated sorting genetic algorithm."""

    name = "nsga2"

    def optimize(
        self,
        init_pop: Sequence[Individual],
        problem: DynamicProblem,
        t: float,
        cfg: OptimizerConfig,
        rng: np.random.Generator,
    ) -> OptimizationResult:
        """Run cfg.generations generations under F(., t) starting from init_pop."""
        N = cfg.population_size
        if len(init_pop) != N:
            raise ContractViolation(f"initial population has {len(init_pop)} members, expected {N}")
        pm = (
            cfg.mutation_probability
            if cfg.mutation_probability is not None
            else 1.0 / problem.n
        )
        X = problem.check_bounds(stack_decisions(init_pop))
        F = problem.evaluate_many(X, t)
        evaluations = N
        rank, crowding = rank_and_crowding(F)

        for generation in range(cfg.generations):
            parents = X[binary_tournament(rank, crowding, N, rng)]
            offspring = sbx_crossover(
                parents, problem.lower, problem.upper,
                cfg.crossover_eta, cfg.crossover_probability, rng,
            )
            offspring = polynomial_mutation(
                offspring, problem.lower, problem.upper, cfg.mutation_eta, pm, rng
            )
            F_off = problem.evaluate_many(offspring, t)
            evaluations += len(offspring)

            X_all = np.vstack([X, offspring])
            F_all = np.vstack([F, F_off])
            survivors = environmental_selection(F_all, N)
            X, F = X_all[survivors], F_all[survivors]
            rank, crowding = rank_and_crowding(F)
            _LOGGER.debug(
                "%s t=%s generation %d: first front %d",
                problem.name,
                t,
                generation,
                int(np.sum(rank == 0)),
            )

        return OptimizationResult(
            population=make_population(X, F, t=t),
            evaluations=evaluations,
            generations=cfg.generations,
        )


OPTIMIZERS: dict[str, type[NSGA2Optimizer]] = {NSGA2Optimizer.name: NSGA2Optimizer}
RESERVED_OPTIMIZERS = ("rmmeda",)


def get_optimizer(name: str) -> Optimizer:
    """Instantiate a registered optimizer by name."""
    key = name.lower()
    if key in RESERVED_OPTIMIZERS:
        raise UnknownOptimizer(name, f"Optimizer '{name}' is reserved but not available")
    if key not in OPTIMIZERS:
        raise UnknownOptimizer(name)
    return OPTIMIZERS[key]()


def optimize(
    init_pop: Sequence[Individual],
    problem: DynamicProblem,
    t: float,
    cfg: OptimizerConfig,
    rng: np.random.Generator,
) -> list[Individual]:
    """Final evaluated population of the default optimizer."""
    return NSGA2Optimizer().optimize(init_pop, problem, t, cfg, rng).population


def budget_for_environment(tau_t: int, initial: bool) -> int:
    """Generations to run: the initial budget before the first change, else tau_t."""
    if tau_t < 1:
        raise ContractViolation(f"tau_t must be >= 1, got {tau_t}")
    return INITIAL_GENERATIONS if initial else tau_t
