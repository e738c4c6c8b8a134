"""Weighted epsilon-insensitive support vector regression with an RBF kernel."""

from __future__ import annotations

from dataclasses import dataclass
import logging
import warnings

import numpy as np
from sklearn.exceptions import ConvergenceWarning
from sklearn.svm import SVR

from .const import SVR_C, SVR_EPSILON, SVR_PASSES, SVR_TOL
from .exceptions import ContractViolation

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SvrModel:
    """Fitted regressor: sum_i (alpha_i - alpha_i*) K(x_i, x) + b."""

    estimator: SVR
    caps: np.ndarray
    n_features: int

    @property
    def dual_coef(self) -> np.ndarray:
        """alpha_i - alpha_i* for every support vector."""
        return self.estimator.dual_coef_.ravel()

    @property
    def support(self) -> np.ndarray:
        """Training indices of the support vectors."""
        return self.estimator.support_

    @property
    def support_vectors(self) -> np.ndarray:
        """Decision vectors retained by the solver."""
        return self.estimator.support_vectors_

    @property
    def bias(self) -> float:
        """Intercept b."""
        return float(self.estimator.intercept_[0])

    @property
    def gamma(self) -> float:
        """RBF kernel width."""
        return float(self.estimator.gamma)

    @property
    def C(self) -> float:
        """Base regularisation before per-sample weighting."""
        return float(self.estimator.C)

    @property
    def epsilon(self) -> float:
        """Half-width of the insensitive tube."""
        return float(self.estimator.epsilon)

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Predictions for one vector (scalar array) or each row of X."""
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.shape[1] != self.n_features:
            raise ContractViolation(
                f"expected {self.n_features} features, got {X.shape[1]}"
            )
        y = self.estimator.predict(X)
        return y[0] if single else y


class SvrLearner:
    """Weak-learner factory: one weighted RBF epsilon-SVR per call to `fit`.

    Weights are folded into per-sample caps C_i = C * |X| * w_i / sum(w), so a
    uniform weight vector reproduces the unweighted problem.
    """

    def __init__(
        self,
        C: float = SVR_C,
        epsilon: float = SVR_EPSILON,
        gamma: float | None = None,
        tol: float = SVR_TOL,
        passes: int = SVR_PASSES,
    ) -> None:
        """Create a learner; gamma defaults to 1/n at fit time."""
        if C <= 0 or epsilon < 0 or (gamma is not None and gamma <= 0):
            raise ContractViolation("C and gamma must be > 0 and epsilon >= 0")
        self.C = C
        self.epsilon = epsilon
        self.gamma = gamma
        self.tol = tol
        self.passes = passes

    def __repr__(self) -> str:
        return f"SvrLearner(C={self.C}, epsilon={self.epsilon}, gamma={self.gamma})"

    def fit(self, X: np.ndarray, y: np.ndarray, w: np.ndarray | None = None) -> SvrModel:
        """Solve the weighted epsilon-SVR dual on (X, y)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        y = np.asarray(y, dtype=float).ravel()
        size = len(X)
        w = np.ones(size) if w is None else np.asarray(w, dtype=float).ravel()
        if size < 2 or len(y) != size or len(w) != size:
            raise ContractViolation(
                f"need |X| = |y| = |w| >= 2, got {size}, {len(y)}, {len(w)}"
            )
        if np.any(w < 0) or not w.sum() > 0:
            raise ContractViolation("weights must be non-negative with a positive sum")
        if not np.all(np.isfinite(y)):
            raise ContractViolation("targets must be finite")

        scaled = w / w.sum() * size
        estimator = SVR(
            kernel="rbf",
            C=self.C,
            epsilon=self.epsilon,
            gamma=self.gamma if self.gamma is not None else 1.0 / X.shape[1],
            tol=self.tol,
            max_iter=self.passes * size * size,
        )
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ConvergenceWarning)
            estimator.fit(X, y, sample_weight=scaled)
        capped = False
        for item in caught:
            if issubclass(item.category, ConvergenceWarning):
                capped = True
            else:
                warnings.warn_explicit(item.message, item.category, item.filename, item.lineno)
        if capped:
            _LOGGER.warning("SVR hit its iteration cap on %d samples", size)
        return SvrModel(estimator=estimator, caps=self.C * scaled, n_features=X.shape[1])


def fit(
    X: np.ndarray, y: np.ndarray, w: np.ndarray, learner: SvrLearner | None = None
) -> SvrModel:
    """Fit a weighted SVR with default hyperparameters."""
    return (learner or SvrLearner()).fit(X, y, w)


def predict(model: SvrModel, x: np.ndarray) -> float | np.ndarray:
    """Model output at x."""
    return model.predict(x)
