"""
Synthetic bandit environments with categorical action embeddings.
"""

from .config import SyntheticConfig
from .environment import (
    LoggingPolicy,
    SyntheticEnvironment,
    TargetPolicy,
    build_environment,
    embed_distribution,
    embedding_likelihood,
    logging_dist,
    logging_policy,
    q_xa,
    q_xa_batch,
    q_xe,
    q_xe_batch,
    target_dist,
    target_policy,
)
from .sampler import (
    GROUND_TRUTH_CONTEXTS,
    GroundTruth,
    ground_truth_value,
    on_policy_rollout,
    sample_logged_data,
    true_marginal_weights,
)

__all__ = [
    "GROUND_TRUTH_CONTEXTS",
    "GroundTruth",
    "LoggingPolicy",
    "SyntheticConfig",
    "SyntheticEnvironment",
    "TargetPolicy",
    "build_environment",
    "embed_distribution",
    "embedding_likelihood",
    "ground_truth_value",
    "logging_dist",
    "logging_policy",
    "on_policy_rollout",
    "q_xa",
    "q_xa_batch",
    "q_xe",
    "q_xe_batch",
    "sample_logged_data",
    "target_dist",
    "target_policy",
    "true_marginal_weights",
]
