"""Pareto dominance, fast non-dominated sorting and crowding distance."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ContractViolation


@dataclass
class Individual:
    """Decision vector with its objective vector at environment time t."""

    x: np.ndarray
    f: np.ndarray | None = None
    t: float | None = None

    @property
    def evaluated(self) -> bool:
        """True once objectives have been assigned."""
        return self.f is not None


@dataclass
class FrontPartition:
    """Ordered non-dominated fronts as lists of indices into the sorted population."""

    fronts: list[list[int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.fronts)

    def __iter__(self):
        return iter(self.fronts)

    def __getitem__(self, index: int) -> list[int]:
        return self.fronts[index]

    @property
    def size(self) -> int:
        """Number of sorted members."""
        return sum(len(front) for front in self.fronts)

    def ranks(self) -> np.ndarray:
        """Zero-based front index of every member."""
        rank = np.empty(self.size, dtype=int)
        for i, front in enumerate(self.fronts):
            rank[front] = i
        return rank


def make_population(
    X: np.ndarray, F: np.ndarray | None = None, t: float | None = None
) -> list[Individual]:
    """Wrap row-aligned decision/objective arrays as Individuals."""
    if F is None:
        return [Individual(x=np.array(x), t=t) for x in X]
    return [Individual(x=np.array(x), f=np.array(f), t=t) for x, f in zip(X, F)]


def stack_decisions(pop: Sequence[Individual]) -> np.ndarray:
    """Decision vectors of `pop` as one (N, n) array."""
    return np.vstack([ind.x for ind in pop])


def stack_objectives(pop: Sequence[Individual]) -> np.ndarray:
    """Objective vectors of `pop` as one (N, m) array."""
    if any(ind.f is None for ind in pop):
        raise ContractViolation("population contains unevaluated individuals")
    return np.vstack([ind.f for ind in pop])


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True if a is no worse than b everywhere and better somewhere (minimisation)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ContractViolation(f"objective length mismatch {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def domination_matrix(F: np.ndarray) -> np.ndarray:
    """D[i, j] is True when member i dominates member j."""
    F = np.asarray(F, dtype=float)
    no_worse = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    better = np.any(F[:, None, :] < F[None, :, :], axis=2)
    return no_worse & better


def fast_nondominated_sort(pop: Sequence[Sequence[float]] | np.ndarray) -> FrontPartition:
    """Partition objective vectors into non-dominated fronts.

    Members keep their input order inside each front; identical vectors share a front.
    """
    F = np.atleast_2d(np.asarray(pop, dtype=float))
    if F.size == 0:
        raise ContractViolation("cannot sort an empty population")
    dominated_by = domination_matrix(F)
    count = dominated_by.sum(axis=0)
    partition = FrontPartition()
    current = np.flatnonzero(count == 0)
    while current.size:
        partition.fronts.append(current.tolist())
        count = count - dominated_by[current].sum(axis=0)
        count[current] = -1
        current = np.flatnonzero(count == 0)
    return partition


def nondominated(F: np.ndarray) -> np.ndarray:
    """Boolean mask of the first front."""
    return ~domination_matrix(F).any(axis=0)


def crowding_distance(front: Sequence[Sequence[float]] | np.ndarray) -> np.ndarray:
    """Normalised cuboid side-length sum per member; objective extremes get inf."""
    F = np.atleast_2d(np.asarray(front, dtype=float))
    size, m = F.shape
    if size == 0:
        raise ContractViolation("cannot compute crowding of an empty front")
    distance = np.zeros(size)
    if size <= 2:
        distance[:] = np.inf
        return distance
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        low, high = F[order[0], j], F[order[-1], j]
        distance[order[0]] = distance[order[-1]] = np.inf
        if high == low:
            continue
        distance[order[1:-1]] += (F[order[2:], j] - F[order[:-2], j]) / (high - low)
    return distance


def rank_and_crowding(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Front index and within-front crowding distance of every member."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    partition = fast_nondominated_sort(F)
    crowding = np.empty(len(F))
    for front in partition:
        crowding[front] = crowding_distance(F[front])
    return partition.ranks(), crowding


def truncate_by_crowding(front: np.ndarray, k: int) -> np.ndarray:
    """Indices (into `front`) of the k least crowded members, ties in input order."""
    distance = crowding_distance(front)
    return np.sort(np.argsort(-distance, kind="stable")[:k])


def environmental_selection(F: np.ndarray, N: int) -> np.ndarray:
    """Indices of the N survivors: whole fronts first, the last one cut by crowding."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    survivors: list[int] = []
    for front in fast_nondominated_sort(F):
        if len(survivors) + len(front) <= N:
            survivors.extend(front)
            if len(survivors) == N:
                break
            continue
        keep = truncate_by_crowding(F[front], N - len(survivors))
        survivors.extend(np.asarray(front)[keep].tolist())
        break
    return np.asarray(survivors, dtype=int)
