"""
Marginalized inverse propensity scoring.
"""

import logging

import numpy as np

from ..core.dataset import LoggedDataset
from ..core.errors import EstimatorInputError
from .base import EstimateRecord

logger = logging.getLogger(__name__)


def mips(data: LoggedDataset, weights: np.ndarray, name: str = "mips") -> EstimateRecord:
    """
    Mean of w(x_i, e_i) r_i for given marginal weights.

    The weights can be exact (``true_marginal_weights``) or estimated
    (``estimate_marginal_weights``); this function does not care which.

    Raises:
        EstimatorInputError: If the weights do not have one finite,
            non-negative entry per record.

    Example:
        >>> mips(data, np.ones(len(data))).estimate == data.reward.mean()
        True
    """
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(data),):
        raise EstimatorInputError(f"expected {len(data)} marginal weights, got shape {weights.shape}")
    if not np.all(np.isfinite(weights)):
        raise EstimatorInputError("marginal weights must be finite")
    if np.any(weights < 0):
        raise EstimatorInputError(f"marginal weights must be non-negative (min {weights.min()!r})")
    logger.debug(f"{name}: max weight {weights.max():.4g} over {weights.size} records")
    return EstimateRecord.from_terms(name, weights * data.reward)
