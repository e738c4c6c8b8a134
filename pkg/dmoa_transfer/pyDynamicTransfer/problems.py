"""Dynamic multi-objective benchmark problems (FDA and dMOP families)."""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math

import numpy as np

from .const import POF_GRID_3D, POF_POINTS_2D, ChangeType
from .exceptions import ContractViolation, DomainError, UnknownProblem

_LOGGER = logging.getLogger(__name__)


def _sin_half_pi(t: float) -> float:
    return math.sin(0.5 * math.pi * t)


@dataclass
class TimeController:
    """Generation counter mapped onto environment time.

    t = (1/n_t) * floor(tau / tau_t)
    """

    n_t: int
    tau_t: int
    tau: int = 0

    def __post_init__(self) -> None:
        if self.n_t < 1 or self.tau_t < 1:
            raise ContractViolation(
                f"n_t and tau_t must be >= 1, got n_t={self.n_t} tau_t={self.tau_t}"
            )
        if self.tau < 0:
            raise ContractViolation(f"tau must be >= 0, got {self.tau}")

    @property
    def environment_index(self) -> int:
        """Number of changes seen so far."""
        return self.tau // self.tau_t

    @property
    def t(self) -> float:
        """Environment time at the current generation."""
        return time_of_generation(self)

    def advance(self, generations: int = 1) -> float:
        """Move the counter forward and return the new environment time."""
        self.tau += generations
        return self.t


def time_of_generation(ctrl: TimeController) -> float:
    """Environment time for the controller's generation counter."""
    return (ctrl.tau // ctrl.tau_t) / ctrl.n_t


class DynamicProblem:
    """Box-constrained dynamic multi-objective problem.

    Subclasses implement `_objectives`, `_front` and `_optimal_set` on 2-d arrays.
    Instances are never mutated after construction.
    """

    name: str = ""
    m: int = 2
    change_type: ChangeType = ChangeType.TYPE_I

    def __init__(self, n: int, lower: np.ndarray, upper: np.ndarray) -> None:
        """Create a problem over the box [lower, upper]."""
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if n < 2 or lower.shape != (n,) or upper.shape != (n,):
            raise ContractViolation(f"{self.name}: bounds must have length n={n} >= 2")
        if np.any(lower >= upper):
            raise ContractViolation(f"{self.name}: every lower bound must be < upper")
        self._n = n
        self._lower = lower
        self._upper = upper
        self._lower.setflags(write=False)
        self._upper.setflags(write=False)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self._n}, m={self.m})"

    @property
    def n(self) -> int:
        """Decision dimension."""
        return self._n

    @property
    def lower(self) -> np.ndarray:
        """Per-variable lower bounds."""
        return self._lower

    @property
    def upper(self) -> np.ndarray:
        """Per-variable upper bounds."""
        return self._upper

    @property
    def bounds(self) -> list[tuple[float, float]]:
        """Closed interval per decision variable."""
        return list(zip(self._lower.tolist(), self._upper.tolist()))

    def check_bounds(self, X: np.ndarray) -> np.ndarray:
        """Return X as a 2-d float array, raising DomainError on the first violation."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self._n:
            raise ContractViolation(
                f"{self.name}: expected {self._n} decision variables, got {X.shape[1]}"
            )
        inside = (X >= self._lower) & (X <= self._upper)
        if not inside.all():
            row, dim = np.argwhere(~inside)[0]
            raise DomainError(
                int(dim),
                float(X[row, dim]),
                (float(self._lower[dim]), float(self._upper[dim])),
            )
        return X

    def evaluate(self, x: np.ndarray, t: float) -> np.ndarray:
        """Objective vector F(x, t) for one decision vector."""
        return self.evaluate_many(x, t)[0]

    def evaluate_many(self, X: np.ndarray, t: float) -> np.ndarray:
        """Objective vectors for every row of X."""
        if t < 0:
            raise ContractViolation(f"environment time must be >= 0, got {t}")
        return self._objectives(self.check_bounds(X), float(t))

    def sample_uniform(
        self,
        count: int,
        rng: np.random.Generator,
        region: tuple[np.ndarray, np.ndarray] | None = None,
    ) -> np.ndarray:
        """`count` decision vectors drawn from U(lower, upper), or from U(region)."""
        lower, upper = region if region is not None else (self._lower, self._upper)
        return rng.uniform(lower, upper, size=(count, self._n))

    def region_around(self, X: np.ndarray, margin: float) -> tuple[np.ndarray, np.ndarray]:
        """Per-variable span of X widened by margin * (upper - lower) on each side, clipped to the box."""
        if margin < 0:
            raise ContractViolation(f"margin must be >= 0, got {margin}")
        X = self.check_bounds(X)
        pad = margin * (self._upper - self._lower)
        lower = np.maximum(X.min(axis=0) - pad, self._lower)
        upper = np.minimum(X.max(axis=0) + pad, self._upper)
        return lower, upper

    def sample_true_pof(self, t: float, count: int) -> np.ndarray:
        """`count` points on the analytic Pareto front at time t."""
        if count < 2:
            raise ContractViolation(f"count must be >= 2, got {count}")
        if self.m == 2:
            return self._front(np.linspace(0.0, 1.0, count)[:, None], float(t))
        k = math.ceil(math.sqrt(count))
        u, v = np.meshgrid(np.linspace(0.0, 1.0, k), np.linspace(0.0, 1.0, k), indexing="ij")
        grid = np.column_stack([u.ravel(), v.ravel()])[:count]
        return self._front(grid, float(t))

    def reference_front(self, t: float) -> np.ndarray:
        """Reference front used by the metrics (500 points, or a 32x32 grid)."""
        if self.m == 2:
            return self.sample_true_pof(t, POF_POINTS_2D)
        return self.sample_true_pof(t, POF_GRID_3D * POF_GRID_3D)

    def true_extremes(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Per-objective (min, max) of the analytic front."""
        front = self.reference_front(t)
        return front.min(axis=0), front.max(axis=0)

    def sample_true_pos(
        self, t: float, count: int, rng: np.random.Generator
    ) -> np.ndarray:
        """`count` decision vectors on the analytic Pareto set at time t."""
        position = rng.uniform(0.0, 1.0, size=(count, self.m - 1))
        return self._optimal_set(position, float(t))

    def _objectives(self, X: np.ndarray, t: float) -> np.ndarray:
        raise NotImplementedError

    def _front(self, grid: np.ndarray, t: float) -> np.ndarray:
        raise NotImplementedError

    def _optimal_set(self, position: np.ndarray, t: float) -> np.ndarray:
        raise NotImplementedError


class _BiObjective(DynamicProblem):
    """Shared shape f1 = x1, f2 = g * h(f1, g) with a tail optimum."""

    def _tail_optimum(self, t: float) -> float:
        return 0.0

    def _optimal_set(self, position: np.ndarray, t: float) -> np.ndarray:
        X = np.full((len(position), self._n), self._tail_optimum(t))
        X[:, 0] = self._lower[0] + position[:, 0] * (self._upper[0] - self._lower[0])
        return X


def _mixed_box(n: int) -> tuple[np.ndarray, np.ndarray]:
    """x1 in [0, 1], the rest in [-1, 1]."""
    lower = np.full(n, -1.0)
    lower[0] = 0.0
    return lower, np.ones(n)


class FDA1(_BiObjective):
    """FDA1: convex front fixed in time, Pareto set tracks G(t) = sin(0.5 pi t)."""

    name = "FDA1"
    change_type = ChangeType.TYPE_I

    def __init__(self, n: int = 20) -> None:
        super().__init__(n, *_mixed_box(n))

    def _tail_optimum(self, t: float) -> float:
        return _sin_half_pi(t)

    def _objectives(self, X: np.ndarray, t: float) -> np.ndarray:
        f1 = X[:, 0]
        g = 1.0 + np.sum((X[:, 1:] - _sin_half_pi(t)) ** 2, axis=1)
        return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])

    def _front(self, grid: np.ndarray, t: float) -> np.ndarray:
        f1 = grid[:, 0]
        return np.column_stack([f1, 1.0 - np.sqrt(f1)])


class FDA2(_BiObjective):
    """FDA2 with a fixed Pareto set; the front bends between convex and concave.

    f2 = g * (1 - (f1/g)^(1/H(t))), H(t) = 0.75 + 0.7 sin(0.5 pi t), g = 1 + sum x_j^2.
    """

    name = "FDA2"
    change_type = ChangeType.TYPE_III

    def __init__(self, n: int = 31) -> None:
        super().__init__(n, *_mixed_box(n))

    @staticmethod
    def _exponent(t: float) -> float:
        return 1.0 / (0.75 + 0.7 * _sin_half_pi(t))

    def _objectives(self, X: np.ndarray, t: float) -> np.ndarray:
        f1 = X[:, 0]
        g = 1.0 + np.sum(X[:, 1:] ** 2, axis=1)
        return np.column_stack([f1, g * (1.0 - (f1 / g) ** self._exponent(t))])

    def _front(self, grid: np.ndarray, t: float) -> np.ndarray:
        f1 = grid[:, 0]
        return np.column_stack([f1, 1.0 - f1 ** self._exponent(t)])


class FDA3(_BiObjective):
    """FDA3: front rises with G(t) = |sin(0.5 pi t)|, density shifts with F(t)."""

    name = "FDA3"
    change_type = ChangeType.TYPE_II

    def __init__(self, n: int = 30) -> None:
        super().__init__(n, *_mixed_box(n))

    def _tail_optimum(self, t: float) -> float:
        return abs(_sin_half_pi(t))

    def _objectives(self, X: np.ndarray, t: float) -> np.ndarray:
        G = abs(_sin_half_pi(t))
        f1 = X[:, 0] ** (10.0 ** (2.0 * _sin_half_pi(t)))
        g = 1.0 + G + np.sum((X[:, 1:] - G) ** 2, axis=1)
        return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])

    def _front(self, grid: np.ndarray, t: float) -> np.ndarray:
        f1 = grid[:, 0]
        g = 1.0 + abs(_sin_half_pi(t))
        return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])

    def _optimal_set(self, position: np.ndarray, t: float) -> np.ndarray:
        X = super()._optimal_set(position, t)
        # invert x1 -> x1^F(t) so the position is uniform in f1
        X[:, 0] = position[:, 0] ** (1.0 / (10.0 ** (2.0 * _sin_half_pi(t))))
        return X


class _Spherical(DynamicProblem):
    """Three-objective spherical front on the unit box (FDA4/FDA5 shape)."""

    m = 3

    def __init__(self, n: int = 12) -> None:
        super().__init__(n, np.zeros(n), np.ones(n))

    def _position(self, X: np.ndarray, t: float) -> np.ndarray:
        return X[:, : self.m - 1]

    def _distance(self, X: np.ndarray, t: float) -> np.ndarray:
        G = abs(_sin_half_pi(t))
        return np.sum((X[:, self.m - 1 :] - G) ** 2, axis=1)

    def _radius(self, t: float) -> float:
        return 1.0

    @staticmethod
    def _sphere(angles: np.ndarray, radius: np.ndarray | float) -> np.ndarray:
        a = angles[:, 0] * np.pi / 2.0
        b = angles[:, 1] * np.pi / 2.0
        return np.column_stack(
            [np.cos(a) * np.cos(b), np.cos(a) * np.sin(b), np.sin(a)]
        ) * np.reshape(radius, (-1, 1))

    def _objectives(self, X: np.ndarray, t: float) -> np.ndarray:
        return self._sphere(self._position(X, t), 1.0 + self._distance(X, t))

    def _front(self, grid: np.ndarray, t: float) -> np.ndarray:
        return self._sphere(grid, self._radius(t))

    def _optimal_set(self, position: np.ndarray, t: float) -> np.ndarray:
        X = np.full((len(position), self._n), abs(_sin_half_pi(t)))
        X[:, : self.m - 1] = position
        return X


class FDA4(_Spherical):
    """FDA4: unit-sphere octant front, Pareto set tracks G(t)."""

    name = "FDA4"
    change_type = ChangeType.TYPE_I


class FDA5(_Spherical):
    """FDA5: sphere of radius 1 + G(t), position variables warped by F(t)."""

    name = "FDA5"
    change_type = ChangeType.TYPE_II

    @staticmethod
    def _warp(t: float) -> float:
        return 1.0 + 100.0 * _sin_half_pi(t) ** 4

    def _position(self, X: np.ndarray, t: float) -> np.ndarray:
        return X[:, : self.m - 1] ** self._warp(t)

    def _distance(self, X: np.ndarray, t: float) -> np.ndarray:
        return abs(_sin_half_pi(t)) + super()._distance(X, t)

    def _radius(self, t: float) -> float:
        return 1.0 + abs(_sin_half_pi(t))

    def _optimal_set(self, position: np.ndarray, t: float) -> np.ndarray:
        X = super()._optimal_set(position, t)
        X[:, : self.m - 1] = position ** (1.0 / self._warp(t))
        return X


def _dmop_exponent(t: float) -> float:
    return 0.75 * _sin_half_pi(t) + 1.25


class DMOP1(_BiObjective):
    """dMOP1: fixed Pareto set, front exponent H(t) = 0.75 sin(0.5 pi t) + 1.25."""

    name = "dMOP1"
    change_type = ChangeType.TYPE_III

    def __init__(self, n: int = 10) -> None:
        super().__init__(n, np.zeros(n), np.ones(n))

    def _objectives(self, X: np.ndarray, t: float) -> np.ndarray:
        f1 = X[:, 0]
        g = 1.0 + 9.0 * np.sum(X[:, 1:] ** 2, axis=1)
        return np.column_stack([f1, g * (1.0 - (f1 / g) ** _dmop_exponent(t))])

    def _front(self, grid: np.ndarray, t: float) -> np.ndarray:
        f1 = grid[:, 0]
        return np.column_stack([f1, 1.0 - f1 ** _dmop_exponent(t)])


class DMOP2(DMOP1):
    """dMOP2: dMOP1's moving front plus a Pareto set at G(t) = |sin(0.5 pi t)|."""

    name = "dMOP2"
    change_type = ChangeType.TYPE_II

    def _tail_optimum(self, t: float) -> float:
        return abs(_sin_half_pi(t))

    def _objectives(self, X: np.ndarray, t: float) -> np.ndarray:
        f1 = X[:, 0]
        g = 1.0 + 9.0 * np.sum((X[:, 1:] - self._tail_optimum(t)) ** 2, axis=1)
        return np.column_stack([f1, g * (1.0 - (f1 / g) ** _dmop_exponent(t))])


class DMOP3(_BiObjective):
    """dMOP3: fixed convex front; the position variable index moves at random.

    The index is a pure function of (seed, t) so evaluation stays deterministic.
    """

    name = "dMOP3"
    change_type = ChangeType.TYPE_I

    def __init__(self, n: int = 10, seed: int = 0) -> None:
        super().__init__(n, np.zeros(n), np.ones(n))
        self._seed = seed

    def position_index(self, t: float) -> int:
        """Index of the variable acting as f1 at time t."""
        key = int(round(t * 1_000_000))
        return int(np.random.default_rng([self._seed, key]).integers(self._n))

    def _tail_optimum(self, t: float) -> float:
        return abs(_sin_half_pi(t))

    def _objectives(self, X: np.ndarray, t: float) -> np.ndarray:
        r = self.position_index(t)
        f1 = X[:, r]
        tail = np.delete(X, r, axis=1)
        g = 1.0 + 9.0 * np.sum((tail - self._tail_optimum(t)) ** 2, axis=1)
        return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])

    def _front(self, grid: np.ndarray, t: float) -> np.ndarray:
        f1 = grid[:, 0]
        return np.column_stack([f1, 1.0 - np.sqrt(f1)])

    def _optimal_set(self, position: np.ndarray, t: float) -> np.ndarray:
        X = np.full((len(position), self._n), self._tail_optimum(t))
        X[:, self.position_index(t)] = position[:, 0]
        return X


PROBLEMS: dict[str, type[DynamicProblem]] = {
    cls.name: cls for cls in (FDA1, FDA2, FDA3, FDA4, FDA5, DMOP1, DMOP2, DMOP3)
}


def get_problem(name: str, n: int | None = None, seed: int = 0) -> DynamicProblem:
    """Build a registered problem by name (case-insensitive)."""
    for key, cls in PROBLEMS.items():
        if key.lower() == name.lower():
            break
    else:
        raise UnknownProblem(name)
    kwargs = {} if n is None else {"n": n}
    if cls is DMOP3:
        kwargs["seed"] = seed
    problem = cls(**kwargs)
    _LOGGER.debug("Built problem %s", problem)
    return problem


def evaluate(problem: DynamicProblem, x: np.ndarray, t: float) -> np.ndarray:
    """F(x, t) for one decision vector."""
    return problem.evaluate(x, t)


def sample_true_pof(problem: DynamicProblem, t: float, count: int) -> np.ndarray:
    """`count` points on the analytic front of `problem` at time t."""
    return problem.sample_true_pof(t, count)
