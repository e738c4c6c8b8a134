"""Synthetic one-dimensional regression transfer tasks and their property checks."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
import logging

import numpy as np

from .const import SHIFT_CONSTANT, Domain, TaskKind
from .exceptions import ContractViolation
from .svr import SvrLearner
from .transfer import TransferBooster, WeightedSample

_LOGGER = logging.getLogger(__name__)

SELFTEST_SEEDS = 10
SELFTEST_SOURCE = 60
SELFTEST_TARGET = 20
SELFTEST_TEST = 200
SELFTEST_NOISE = 0.1


def _wave(x: np.ndarray) -> np.ndarray:
    return np.sin(2.0 * np.pi * x)


SOURCE_FUNCTIONS: dict[TaskKind, Callable[[np.ndarray], np.ndarray]] = {
    TaskKind.IDENTICAL: _wave,
    TaskKind.SHIFTED: lambda x: _wave(x) + SHIFT_CONSTANT,
    TaskKind.UNRELATED: lambda x: -x,
}


@dataclass
class SyntheticTask:
    """Source and target training samples plus a noiseless held-out target set."""

    kind: TaskKind
    source: list[WeightedSample]
    target: list[WeightedSample]
    test_x: np.ndarray
    test_y: np.ndarray

    @property
    def samples(self) -> list[WeightedSample]:
        """Source followed by target samples."""
        return self.source + self.target


def _samples(
    x: np.ndarray, y: np.ndarray, domain: Domain, weight: float
) -> list[WeightedSample]:
    return [
        WeightedSample(np.array([xi]), np.array([yi]), domain, weight)
        for xi, yi in zip(x, y)
    ]


def make_shifted_task(
    kind: TaskKind | str,
    n_source: int,
    n_target: int,
    noise_sigma: float,
    rng: np.random.Generator,
    n_test: int = SELFTEST_TEST,
) -> SyntheticTask:
    """Draw x ~ U(0, 1) for each domain; target is always sin(2 pi x)."""
    kind = TaskKind(kind)
    if n_source < 2 or n_target < 2 or n_test < 2:
        raise ContractViolation("sample sizes must be >= 2")
    if noise_sigma < 0:
        raise ContractViolation(f"noise_sigma must be >= 0, got {noise_sigma}")

    weight = 1.0 / (n_source + n_target)
    x_source = rng.uniform(0.0, 1.0, n_source)
    y_source = SOURCE_FUNCTIONS[kind](x_source) + rng.normal(0.0, noise_sigma, n_source)
    x_target = rng.uniform(0.0, 1.0, n_target)
    y_target = _wave(x_target) + rng.normal(0.0, noise_sigma, n_target)
    test_x = rng.uniform(0.0, 1.0, n_test)
    return SyntheticTask(
        kind=kind,
        source=_samples(x_source, y_source, Domain.SOURCE, weight),
        target=_samples(x_target, y_target, Domain.TARGET, weight),
        test_x=test_x[:, None],
        test_y=_wave(test_x),
    )


@dataclass(frozen=True)
class PropertyResult:
    """Outcome of one selftest property."""

    name: str
    passed: bool
    detail: str


def _rmse(predicted: np.ndarray, actual: np.ndarray) -> float:
    return float(np.sqrt(np.mean((predicted - actual) ** 2)))


def _learner() -> SvrLearner:
    # one input dimension, so the default 1/n width is too wide for a full sine period
    return SvrLearner(gamma=10.0)


def check_source_filtering(seeds: int = SELFTEST_SEEDS) -> PropertyResult:
    """Unrelated source data ends with less total weight than target data."""
    wins = 0
    for seed in range(seeds):
        task = make_shifted_task(
            TaskKind.UNRELATED, SELFTEST_SOURCE, SELFTEST_TARGET, SELFTEST_NOISE,
            np.random.default_rng(seed),
        )
        chain = TransferBooster(learner=_learner).train(task.samples).chains[0]
        final = chain.weight_history[-1] if chain.weight_history else None
        if final is not None and final[: SELFTEST_SOURCE].sum() < final[SELFTEST_SOURCE:].sum():
            wins += 1
    return PropertyResult("unrelated source filtered", wins >= 9, f"{wins}/{seeds} seeds")


def check_identical_harmless(seeds: int = SELFTEST_SEEDS) -> PropertyResult:
    """On identical domains the ensemble is no worse than 1.1x a target-only SVR."""
    wins = 0
    for seed in range(seeds):
        task = make_shifted_task(
            TaskKind.IDENTICAL, SELFTEST_SOURCE, SELFTEST_TARGET, SELFTEST_NOISE,
            np.random.default_rng(seed),
        )
        ensemble = TransferBooster(learner=_learner).train(task.samples)
        X_target = np.vstack([s.x for s in task.target])
        y_target = np.array([s.y[0] for s in task.target])
        baseline = _learner().fit(X_target, y_target)
        transfer_rmse = _rmse(ensemble.predict(task.test_x)[:, 0], task.test_y)
        baseline_rmse = _rmse(baseline.predict(task.test_x), task.test_y)
        if transfer_rmse <= 1.1 * baseline_rmse:
            wins += 1
    return PropertyResult("identical transfer harmless", wins >= 8, f"{wins}/{seeds} seeds")


def check_boosting_invariants(seeds: int = SELFTEST_SEEDS) -> PropertyResult:
    """Weights stay a distribution and adjusted errors stay in [0, 1] on every task."""
    failures: list[str] = []
    for kind in TaskKind:
        for seed in range(seeds):
            task = make_shifted_task(
                kind, SELFTEST_SOURCE, SELFTEST_TARGET, SELFTEST_NOISE,
                np.random.default_rng(seed),
            )
            chain = TransferBooster(learner=_learner).train(task.samples).chains[0]
            weights_ok = all(
                np.all(w >= 0) and abs(w.sum() - 1.0) <= 1e-12 for w in chain.weight_history
            )
            errors_ok = all(
                np.all((e >= 0) & (e <= 1)) for e in chain.error_history
            )
            if not (weights_ok and errors_ok):
                failures.append(f"{kind.value}/{seed}")
    return PropertyResult(
        "boosting invariants",
        not failures,
        "all runs" if not failures else "failed: " + ", ".join(failures),
    )


def run_selftest(seeds: int = SELFTEST_SEEDS) -> list[PropertyResult]:
    """Every transfer property, in report order."""
    results = [
        check_source_filtering(seeds),
        check_identical_harmless(seeds),
        check_boosting_invariants(seeds),
    ]
    for result in results:
        _LOGGER.debug("selftest %s: %s (%s)", result.name, result.passed, result.detail)
    return results
