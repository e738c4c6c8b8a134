"""Boosted instance-transfer regression (TrAdaBoost.R2 style).

Source samples come from the previous environment, target samples from the
current one. Each boosting round fits a weighted weak regressor on both, then
shrinks the weight of badly predicted source samples and grows the weight of
badly predicted target samples. One independent chain is trained per objective.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
import logging
import math

import numpy as np

from .const import (
    BETA_CEIL,
    BETA_FLOOR,
    DEFAULT_BOOSTING_ROUNDS,
    HYPOTHESIS_ERROR_LIMIT,
    Domain,
)
from .exceptions import ContractViolation, PerfectHypothesis
from .pareto import Individual
from .problems import DynamicProblem
from .svr import SvrLearner, SvrModel

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightedSample:
    """Training instance tagged with the environment it was evaluated in."""

    x: np.ndarray
    y: np.ndarray
    domain: Domain
    w: float


@dataclass
class BoostingChain:
    """Retained hypotheses of one objective plus the audit trail of every round."""

    objective: int
    hypotheses: list[SvrModel] = field(default_factory=list)
    betas: list[float] = field(default_factory=list)
    completed: int = 0
    stop_reason: str = "rounds"
    weight_history: list[np.ndarray] = field(default_factory=list)
    error_history: list[np.ndarray] = field(default_factory=list)
    epsilon_history: list[float] = field(default_factory=list)

    @property
    def confidences(self) -> np.ndarray:
        """ln(1/beta_i) of each retained hypothesis."""
        return np.log(1.0 / np.asarray(self.betas))

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Confidence-weighted median of the retained hypotheses."""
        predictions = np.vstack([h.predict(X) for h in self.hypotheses])
        return weighted_median(predictions, self.confidences)


@dataclass
class TransferEnsemble:
    """Strong hypothesis h^t: one boosting chain per objective."""

    chains: list[BoostingChain]

    @property
    def m(self) -> int:
        """Number of objectives predicted."""
        return len(self.chains)

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Predicted objective vector(s) for x or for each row of X."""
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        F = np.column_stack([chain.predict(X) for chain in self.chains])
        return F[0] if single else F


def weighted_median(predictions: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Per column, the smallest prediction whose cumulative weight reaches half the total.

    predictions has one row per hypothesis and one column per query point.
    """
    predictions = np.atleast_2d(np.asarray(predictions, dtype=float))
    weights = np.asarray(weights, dtype=float)
    order = np.argsort(predictions, axis=0, kind="stable")
    cdf = np.cumsum(weights[order], axis=0)
    reached = cdf >= 0.5 * cdf[-1] * (1.0 - 1e-12)
    pick = reached.argmax(axis=0)
    ranked = np.take_along_axis(predictions, order, axis=0)
    return ranked[pick, np.arange(predictions.shape[1])]


def build_training_set(
    prev_pop: Sequence[Individual],
    problem: DynamicProblem,
    t: float,
    target_count: int,
    rng: np.random.Generator,
    region: tuple[np.ndarray, np.ndarray] | None = None,
) -> list[WeightedSample]:
    """Source = previous population with its old objectives; target = fresh U(a, b) samples under F_t.

    (a, b) is the decision box unless a narrower region is given.
    """
    if not prev_pop:
        raise ContractViolation("previous population is empty")
    if any(ind.f is None for ind in prev_pop):
        raise ContractViolation("previous population must be evaluated")
    if target_count < 2:
        raise ContractViolation(f"target_count must be >= 2, got {target_count}")

    X_target = problem.sample_uniform(target_count, rng, region)
    F_target = problem.evaluate_many(X_target, t)
    weight = 1.0 / (len(prev_pop) + target_count)
    samples = [
        WeightedSample(np.array(ind.x), np.array(ind.f), Domain.SOURCE, weight)
        for ind in prev_pop
    ]
    samples.extend(
        WeightedSample(x, f, Domain.TARGET, weight) for x, f in zip(X_target, F_target)
    )
    _LOGGER.debug(
        "Training set at t=%s: %d source + %d target", t, len(prev_pop), target_count
    )
    return samples


def adjusted_errors(residuals: np.ndarray) -> np.ndarray:
    """Residuals divided by the largest one over both domains."""
    residuals = np.asarray(residuals, dtype=float)
    if np.any(residuals < 0):
        raise ContractViolation("residuals must be absolute values")
    largest = residuals.max()
    if largest == 0:
        raise PerfectHypothesis("every residual is zero")
    return residuals / largest


def _target_mask(samples: Sequence[WeightedSample]) -> np.ndarray:
    return np.array([s.domain is Domain.TARGET for s in samples])


def _weights(samples: Sequence[WeightedSample]) -> np.ndarray:
    return np.array([s.w for s in samples])


def hypothesis_error(errors: np.ndarray, samples: Sequence[WeightedSample]) -> float:
    """Weighted adjusted error over target-domain samples only."""
    errors = np.asarray(errors, dtype=float)
    if len(errors) != len(samples):
        raise ContractViolation("errors and samples differ in length")
    target = _target_mask(samples)
    return float(np.sum(errors[target] * _weights(samples)[target]))


def source_beta(n_source: int, rounds: int) -> float:
    """Fixed source decay factor 1 / (1 + sqrt(2 ln|D_source| / K))."""
    beta = 1.0 / (1.0 + math.sqrt(2.0 * math.log(max(n_source, 1)) / rounds))
    return min(max(beta, BETA_FLOOR), BETA_CEIL)


def clamp_beta(epsilon: float) -> float:
    """beta_i = eps / (1 - eps) forced into (0, 1)."""
    beta = epsilon / (1.0 - epsilon) if epsilon < 1.0 else BETA_CEIL
    return min(max(beta, BETA_FLOOR), BETA_CEIL)


def update_weights(
    samples: Sequence[WeightedSample], errors: np.ndarray, beta_i: float, beta: float
) -> list[WeightedSample]:
    """Source w * beta^e, target w * beta_i^-e, then renormalise to sum 1."""
    errors = np.asarray(errors, dtype=float)
    target = _target_mask(samples)
    weights = _weights(samples)
    weights = np.where(target, weights * beta_i ** (-errors), weights * beta**errors)
    weights /= weights.sum()
    return [replace(s, w=float(w)) for s, w in zip(samples, weights)]


class TransferBooster:
    """Trains a TransferEnsemble on a weighted source/target sample set."""

    def __init__(
        self,
        rounds: int = DEFAULT_BOOSTING_ROUNDS,
        learner: SvrLearner | Callable[[], SvrLearner] | None = None,
    ) -> None:
        """Create a booster running `rounds` (K) rounds per objective."""
        if rounds < 2:
            raise ContractViolation(f"K must be >= 2, got {rounds}")
        self.rounds = rounds
        if learner is None:
            learner = SvrLearner()
        self._learner = learner if isinstance(learner, SvrLearner) else learner()

    def train(self, samples: Sequence[WeightedSample]) -> TransferEnsemble:
        """Run one boosting chain per objective."""
        if not samples:
            raise ContractViolation("empty training set")
        m = len(samples[0].y)
        return TransferEnsemble([self._train_chain(samples, j) for j in range(m)])

    def _train_chain(self, samples: Sequence[WeightedSample], objective: int) -> BoostingChain:
        X = np.vstack([s.x for s in samples])
        y = np.array([s.y[objective] for s in samples])
        n_source = int(np.sum(~_target_mask(samples)))
        beta = source_beta(n_source, self.rounds)
        chain = BoostingChain(objective=objective)
        rounds: list[tuple[SvrModel, float]] = []

        for i in range(self.rounds):
            model = self._learner.fit(X, y, _weights(samples))
            residuals = np.abs(y - model.predict(X))
            try:
                errors = adjusted_errors(residuals)
            except PerfectHypothesis:
                rounds.append((model, BETA_FLOOR))
                chain.stop_reason = "perfect"
                _LOGGER.debug("Objective %d: perfect hypothesis at round %d", objective, i)
                break
            epsilon = hypothesis_error(errors, samples)
            chain.error_history.append(errors)
            chain.epsilon_history.append(epsilon)
            if epsilon >= HYPOTHESIS_ERROR_LIMIT:
                if not rounds:
                    rounds.append((model, clamp_beta(epsilon)))
                chain.stop_reason = "error"
                _LOGGER.warning(
                    "Objective %d: boosting stopped at round %d, error %.4f",
                    objective,
                    i,
                    epsilon,
                )
                break
            beta_i = clamp_beta(epsilon)
            rounds.append((model, beta_i))
            samples = update_weights(samples, errors, beta_i, beta)
            chain.weight_history.append(_weights(samples))

        chain.completed = len(rounds)
        kept = rounds[-math.ceil(len(rounds) / 2) :]
        chain.hypotheses = [model for model, _ in kept]
        chain.betas = [beta_i for _, beta_i in kept]
        return chain


def train(
    samples: Sequence[WeightedSample],
    K: int = DEFAULT_BOOSTING_ROUNDS,
    learner: SvrLearner | Callable[[], SvrLearner] | None = None,
) -> TransferEnsemble:
    """Train the transfer ensemble with K rounds per objective."""
    return TransferBooster(K, learner).train(samples)


def predict(ens: TransferEnsemble, x: np.ndarray) -> np.ndarray:
    """Objective vector predicted by the ensemble."""
    return ens.predict(x)
