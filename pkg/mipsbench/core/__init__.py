"""
Core types: distributions, policies, logged data and importance weights.
"""

from .dataset import LoggedDataset, LoggedRecord
from .distributions import (
    Distribution,
    epsilon_greedy_policy,
    epsilon_greedy_rows,
    sample_categorical,
    softmax_policy,
    softmax_rows,
)
from .errors import (
    AssumptionViolationError,
    DeficientEmbeddingSupportError,
    DeficientSupportError,
    EstimatorInputError,
    InvalidEnvironmentError,
    MipsBenchError,
)
from .policies import FixedPolicy, Policy
from .weights import (
    embedding_marginal,
    logging_posterior,
    marginal_weight_true,
    marginal_weights,
    vanilla_weight,
    vanilla_weights,
)

__all__ = [
    "AssumptionViolationError",
    "DeficientEmbeddingSupportError",
    "DeficientSupportError",
    "Distribution",
    "EstimatorInputError",
    "FixedPolicy",
    "InvalidEnvironmentError",
    "LoggedDataset",
    "LoggedRecord",
    "MipsBenchError",
    "Policy",
    "embedding_marginal",
    "epsilon_greedy_policy",
    "epsilon_greedy_rows",
    "logging_posterior",
    "marginal_weight_true",
    "marginal_weights",
    "sample_categorical",
    "softmax_policy",
    "softmax_rows",
    "vanilla_weight",
    "vanilla_weights",
]
