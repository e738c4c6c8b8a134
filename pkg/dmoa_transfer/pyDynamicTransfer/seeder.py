"""Initial population prediction from a trained transfer ensemble."""

from __future__ import annotations

import logging
from typing import Protocol

import numpy as np

from .const import DEFAULT_TEST_COUNT, NOISE_SCALE
from .exceptions import ContractViolation
from .pareto import Individual, fast_nondominated_sort, make_population, truncate_by_crowding
from .problems import DynamicProblem

_LOGGER = logging.getLogger(__name__)


class ObjectivePredictor(Protocol):
    """Anything mapping decision vectors to predicted objective vectors."""

    def predict(self, X: np.ndarray) -> np.ndarray: ...


def select_by_predicted_fronts(predicted: np.ndarray, N: int) -> np.ndarray:
    """Indices of whole predicted fronts while they fit in N.

    When the first front alone exceeds N it is cut to N by crowding distance.
    """
    partition = fast_nondominated_sort(predicted)
    selected: list[int] = []
    for front in partition:
        if len(selected) + len(front) > N:
            break
        selected.extend(front)
    if not selected:
        first = np.asarray(partition[0])
        _LOGGER.warning("First predicted front (%d) exceeds N=%d, truncating", len(first), N)
        return first[truncate_by_crowding(predicted[first], N)]
    return np.asarray(selected, dtype=int)


def pad_with_noise(
    X: np.ndarray,
    N: int,
    problem: DynamicProblem,
    rng: np.random.Generator,
    noise_scale: float = NOISE_SCALE,
) -> np.ndarray:
    """Grow X to N rows with Gaussian-perturbed copies taken round-robin, clipped to bounds."""
    missing = N - len(X)
    if missing <= 0:
        return X
    sigma = noise_scale * (problem.upper - problem.lower)
    bases = X[np.arange(missing) % len(X)]
    noisy = bases + rng.normal(0.0, 1.0, size=bases.shape) * sigma
    return np.vstack([X, np.clip(noisy, problem.lower, problem.upper)])


def predict_initial_population(
    ens: ObjectivePredictor,
    problem: DynamicProblem,
    N: int,
    test_count: int = DEFAULT_TEST_COUNT,
    rng: np.random.Generator | None = None,
    noise_scale: float = NOISE_SCALE,
    t: float | None = None,
    region: tuple[np.ndarray, np.ndarray] | None = None,
    carry: np.ndarray | None = None,
) -> list[Individual]:
    """Screen a uniform candidate pool through `ens` and assemble N unevaluated individuals.

    The pool holds `test_count` vectors: the `carry` rows, if any, topped up with
    samples from U(region), or from the whole box when no region is given.
    """
    if N < 2:
        raise ContractViolation(f"N must be >= 2, got {N}")
    if test_count < N:
        raise ContractViolation(f"test_count ({test_count}) must be >= N ({N})")
    rng = rng if rng is not None else np.random.default_rng()

    carried = np.empty((0, problem.n)) if carry is None else problem.check_bounds(carry)
    if len(carried) > test_count:
        raise ContractViolation(
            f"{len(carried)} carried candidates exceed the pool size {test_count}"
        )
    pool = np.vstack([carried, problem.sample_uniform(test_count - len(carried), rng, region)])
    if len(pool) == 0:
        raise ContractViolation("empty candidate pool")
    predicted = np.atleast_2d(ens.predict(pool))
    selected = select_by_predicted_fronts(predicted, N)
    chosen = pool[selected]
    _LOGGER.debug(
        "Predicted fronts supplied %d of %d initial members, %d carried over",
        len(chosen),
        N,
        int(np.sum(selected < len(carried))),
    )
    return make_population(pad_with_noise(chosen, N, problem, rng, noise_scale), t=t)
