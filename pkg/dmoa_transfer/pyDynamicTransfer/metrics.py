"""Convergence and spread indicators against analytic reference fronts."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist

from .exceptions import ContractViolation


def _as_set(points: np.ndarray, label: str) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.size == 0:
        raise ContractViolation(f"{label} set is empty")
    return points


def igd(reference: np.ndarray, obtained: np.ndarray, squared: bool = False) -> float:
    """Mean distance from each reference point to its nearest obtained point.

    squared=True averages squared distances instead.
    """
    reference = _as_set(reference, "reference")
    obtained = _as_set(obtained, "obtained")
    if reference.shape[1] != obtained.shape[1]:
        raise ContractViolation("reference and obtained differ in objective count")
    nearest = cdist(reference, obtained).min(axis=1)
    if squared:
        nearest = nearest**2
    return float(nearest.mean())


def migd(per_environment_igds: Sequence[float]) -> float:
    """Mean IGD over all environments."""
    values = np.asarray(per_environment_igds, dtype=float)
    if values.size == 0:
        raise ContractViolation("no IGD values to average")
    return float(values.mean())


def maximum_spread(
    true_extremes: tuple[np.ndarray, np.ndarray], obtained: np.ndarray
) -> float:
    """Root mean square of each objective's covered share of the true range."""
    true_min, true_max = (np.asarray(v, dtype=float) for v in true_extremes)
    if np.any(true_max <= true_min):
        raise ContractViolation("true objective range is degenerate")
    obtained = _as_set(obtained, "obtained")
    overlap = np.minimum(true_max, obtained.max(axis=0)) - np.maximum(
        true_min, obtained.min(axis=0)
    )
    terms = np.clip(overlap, 0.0, None) / (true_max - true_min)
    return float(np.sqrt(np.mean(terms**2)))


@dataclass(frozen=True)
class EnvironmentRecord:
    """Indicators of one environment's final population."""

    env_index: int
    t: float
    igd: float
    ms: float
    evals_used: int
    generations: int
    transfer_evals: int = 0


@dataclass
class RunReport:
    """Per-environment indicators of one (problem, setting, seed, variant) cell."""

    problem: str
    tau_t: int
    n_t: int
    seed: int
    variant: str
    records: list[EnvironmentRecord] = field(default_factory=list)

    @property
    def migd(self) -> float:
        """Mean of the recorded IGD values."""
        return migd([r.igd for r in self.records])

    @property
    def mean_ms(self) -> float:
        """Mean of the recorded MS values."""
        return float(np.mean([r.ms for r in self.records]))

    @property
    def total_generations(self) -> int:
        """Sum of per-environment generation budgets."""
        return sum(r.generations for r in self.records)

    def to_frame(self) -> pd.DataFrame:
        """One row per environment in the report CSV column order."""
        rows = [
            {
                "problem": self.problem,
                "tau_t": self.tau_t,
                "n_t": self.n_t,
                "seed": self.seed,
                "variant": self.variant,
                **asdict(record),
            }
            for record in self.records
        ]
        return pd.DataFrame(rows, columns=REPORT_COLUMNS)


REPORT_COLUMNS = [
    "problem",
    "tau_t",
    "n_t",
    "seed",
    "variant",
    "env_index",
    "t",
    "igd",
    "ms",
    "evals_used",
    "generations",
    "transfer_evals",
]
