"""
Baseline estimators: IPS, DM, DR and the shrunk-weight DR family.

MRDR is ``dr`` called with a reward model whose provenance is ``mrdr``;
training that model is the models package's job.
"""

from typing import Literal
import logging
import numbers

import numpy as np
from sklearn.utils import check_scalar

from ..core.dataset import LoggedDataset
from ..core.errors import EstimatorInputError
from ..core.policies import Policy
from ..core.weights import vanilla_weights
from .base import EstimateRecord, RewardModel

logger = logging.getLogger(__name__)

ShrinkKind = Literal["switch", "os", "lambda"]

SHRUNK_NAMES = {"switch": "switch-dr", "os": "dros", "lambda": "dr-lambda"}


def logged_weights(data: LoggedDataset, target: Policy) -> np.ndarray:
    """Vanilla weights pi(a_i|x_i) / pi_0(a_i|x_i) of the logged records."""
    return vanilla_weights(target.action_dist(data.context), data.pscore, data.action)


def ips(data: LoggedDataset, target: Policy) -> EstimateRecord:
    """
    Inverse propensity scoring: mean of w(x_i, a_i) r_i.

    Example:
        With target = logging every weight is 1 and the estimate is the
        mean reward.
    """
    terms = logged_weights(data, target) * data.reward
    return EstimateRecord.from_terms("ips", terms)


def _dm_terms(data: LoggedDataset, target: Policy, q_xa: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", target.action_dist(data.context), q_xa)


def dm(data: LoggedDataset, target: Policy, model: RewardModel) -> EstimateRecord:
    """Direct method: mean of sum_a pi(a|x_i) q_hat(x_i, a)."""
    return EstimateRecord.from_terms("dm", _dm_terms(data, target, model.predict_xa(data)))


def _dr_terms(data: LoggedDataset, target: Policy, model: RewardModel, weights: np.ndarray) -> np.ndarray:
    q_xa = model.predict_xa(data)
    residual = data.reward - q_xa[np.arange(len(data)), data.action]
    return _dm_terms(data, target, q_xa) + weights * residual


def dr(data: LoggedDataset, target: Policy, model: RewardModel) -> EstimateRecord:
    """
    Doubly robust: DM plus the importance-weighted residual of the logged action.

    The record is named ``mrdr`` when the model was trained with the MRDR
    objective.
    """
    name = "mrdr" if getattr(model, "provenance", "") == "mrdr" else "dr"
    return EstimateRecord.from_terms(name, _dr_terms(data, target, model, logged_weights(data, target)))


def shrink_weights(weights: np.ndarray, kind: ShrinkKind, lam: float) -> np.ndarray:
    """
    Shrink importance weights.

    - ``switch``: w * 1{w <= lam}; lam = inf keeps every weight.
    - ``os``: lam w / (w^2 + lam); lam = 0 gives 0, lam = inf keeps w.
    - ``lambda``: w / (1 - lam + lam w) for lam in [0, 1]; lam = 0 keeps w,
      lam = 1 gives 1 everywhere.

    Raises:
        ValueError: If lam is negative or NaN, or above 1 for ``lambda``.
        EstimatorInputError: For an unknown kind.
    """
    weights = np.asarray(weights, dtype=float)
    if kind not in SHRUNK_NAMES:
        raise EstimatorInputError(f"unknown shrinkage kind {kind!r}; expected one of {sorted(SHRUNK_NAMES)}")
    max_val = 1.0 if kind == "lambda" else None
    check_scalar(lam, "lam", numbers.Real, min_val=0.0, max_val=max_val)
    if np.isnan(lam):
        raise ValueError("lam must not be NaN")

    if kind == "switch":
        return np.where(weights <= lam, weights, 0.0)
    if kind == "os":
        if lam == 0.0:
            return np.zeros_like(weights)
        if np.isinf(lam):
            return weights.copy()
        return lam * weights / (weights**2 + lam)
    if lam == 1.0:
        return np.ones_like(weights)
    return weights / (1.0 - lam + lam * weights)


def shrunk_dr(data: LoggedDataset, target: Policy, model: RewardModel, kind: ShrinkKind, lam: float) -> EstimateRecord:
    """
    DR with the logged weights replaced by their shrunk version.

    Switch and os reduce to DM at lam = 0; lambda reduces to DR at lam = 0.
    """
    weights = shrink_weights(logged_weights(data, target), kind, lam)
    logger.debug(f"{SHRUNK_NAMES[kind]}: lam={lam!r}, {int(np.count_nonzero(weights))} non-zero weights")
    terms = _dr_terms(data, target, model, weights)
    return EstimateRecord.from_terms(SHRUNK_NAMES[kind], terms, lam=float(lam))
