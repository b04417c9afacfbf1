"""
Estimate records and the reward-model protocol.

Every estimator here is a sample mean of per-record terms. The terms are
kept on the record so that confidence half-widths can be computed later
without re-running the estimator, and the mean is taken with
``math.fsum`` so that permuting the records cannot change the estimate.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Protocol, runtime_checkable
import math

import numpy as np

from ..core.dataset import LoggedDataset
from ..core.errors import EstimatorInputError


def sample_mean(terms: np.ndarray) -> float:
    """Correctly rounded mean; independent of the order of ``terms``."""
    terms = np.asarray(terms, dtype=float)
    if terms.size == 0:
        raise EstimatorInputError("cannot average an empty set of terms")
    return math.fsum(terms.tolist()) / terms.size


@dataclass(frozen=True)
class EstimateRecord:
    """
    One estimator's value estimate on one dataset.

    Attributes:
        name: Estimator name (``ips``, ``mips``, ``switch-dr`` ...).
        estimate: Mean of ``per_sample_terms``.
        per_sample_terms: (n,) summands of the estimate.
        fingerprint: Hash of the generating config, filled by the harness.
        seed: Replication seed, filled by the harness.
        metadata: Free-form extras (chosen lambda, chosen dims, skipped mass).
    """

    name: str
    estimate: float
    per_sample_terms: np.ndarray
    fingerprint: str = ""
    seed: Optional[int] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_terms(cls, name: str, terms: np.ndarray, **metadata: Any) -> "EstimateRecord":
        terms = np.array(terms, dtype=float)
        terms.setflags(write=False)
        return cls(name=name, estimate=sample_mean(terms), per_sample_terms=terms, metadata=dict(metadata))

    def renamed(self, name: str) -> "EstimateRecord":
        return replace(self, name=name)

    def tagged(self, fingerprint: str, seed: Optional[int]) -> "EstimateRecord":
        return replace(self, fingerprint=fingerprint, seed=seed)


@runtime_checkable
class RewardModel(Protocol):
    """
    Reward regressor as the model-based estimators consume it.

    Predictions are for the records of the dataset the model was fitted on;
    a cross-fitted model scores each record with a fit that excluded it.
    """

    provenance: str

    def predict_xe(self, data: LoggedDataset) -> np.ndarray:
        """(n,) predictions q_hat(x_i, e_i)."""
        ...

    def predict_xa(self, data: LoggedDataset) -> np.ndarray:
        """(n, |A|) predictions q_hat(x_i, a) for every action."""
        ...


@dataclass(frozen=True, eq=False)
class FixedRewardModel:
    """
    Reward model backed by precomputed predictions.

    Useful for known q functions (tabular instances, the synthetic
    environment's exact q) and for q_hat = 0.
    """

    q_xa: np.ndarray
    q_xe: Optional[np.ndarray] = None
    provenance: str = "fixed"

    def __post_init__(self):
        q_xa = np.array(self.q_xa, dtype=float, ndmin=2)
        if not np.all(np.isfinite(q_xa)):
            raise EstimatorInputError("reward predictions must be finite")
        object.__setattr__(self, "q_xa", q_xa)

    @classmethod
    def zeros(cls, n: int, num_actions: int) -> "FixedRewardModel":
        return cls(q_xa=np.zeros((n, num_actions)), q_xe=np.zeros(n), provenance="zero")

    def predict_xe(self, data: LoggedDataset) -> np.ndarray:
        if self.q_xe is None:
            return self.q_xa[np.arange(len(data)), data.action]
        return np.asarray(self.q_xe, dtype=float)

    def predict_xa(self, data: LoggedDataset) -> np.ndarray:
        if self.q_xa.shape != (len(data), data.num_actions):
            raise EstimatorInputError(
                f"reward predictions have shape {self.q_xa.shape}, expected {(len(data), data.num_actions)}"
            )
        return self.q_xa
