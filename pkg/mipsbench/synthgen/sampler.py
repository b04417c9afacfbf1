"""
Logged-data sampling and ground-truth policy values.
"""

from dataclasses import dataclass
from typing import Optional
import logging
import numbers

import numpy as np
from sklearn.utils import check_scalar

from ..core.dataset import LoggedDataset
from ..core.distributions import sample_categorical
from ..core.policies import Policy
from ..core.weights import marginal_weights
from .config import SyntheticConfig
from .environment import (
    SyntheticEnvironment,
    embedding_likelihood,
    logging_dist,
    q_xa_batch,
    q_xe_batch,
    target_dist,
)
from .seeding import DATA, GROUND_TRUTH, ON_POLICY, stream_rng

logger = logging.getLogger(__name__)

GROUND_TRUTH_CONTEXTS = 1_000_000
_CHUNK_CELLS = 1 << 22


@dataclass(frozen=True)
class GroundTruth:
    """Monte-Carlo policy value with its standard error over ``m`` contexts."""

    value: float
    stderr: float
    m: int


def _draw(env: SyntheticEnvironment, config: SyntheticConfig, n: int, rng: np.random.Generator, policy_probs) -> LoggedDataset:
    context = rng.standard_normal((n, config.context_dim))
    probs = policy_probs(env, config, context)
    action = sample_categorical(probs, rng)
    embedding = np.empty((n, env.embed_dims), dtype=np.int64)
    for k in range(env.embed_dims):
        embedding[:, k] = sample_categorical(env.embed_probs[action, k, :], rng)
    reward = q_xe_batch(env, context, embedding)
    if config.reward_noise > 0:
        reward = reward + config.reward_noise * rng.standard_normal(n)
    return LoggedDataset(
        context=context,
        action=action,
        embedding=embedding,
        reward=reward,
        pscore=probs[np.arange(n), action],
        embedding_cardinalities=config.embedding_cardinalities,
        num_actions=config.num_actions,
        withheld_dims=config.withheld_dims,
    )


def sample_logged_data(env: SyntheticEnvironment, config: SyntheticConfig, n: int, replication: int = 0) -> LoggedDataset:
    """
    Draw n i.i.d. records from the logging policy.

    Per record: x ~ N(0, I), a ~ pi_0(.|x), e_k ~ p(e_k|a) independently per
    dimension, r ~ N(q(x, e), sigma^2). Withheld dimensions stay in the
    record and are masked through ``LoggedDataset.withheld_dims``.

    Args:
        env: Environment built from ``config``.
        config: Supplies beta, sigma, cardinalities, withheld dims and seed.
        n: Number of records, at least 1.
        replication: Index of the data stream; each replication draws from
            its own stream, so replication t is unaffected by how many
            replications run.
    """
    check_scalar(n, "n", numbers.Integral, min_val=1)
    rng = stream_rng(config.seed, DATA, replication)
    data = _draw(env, config, n, rng, logging_dist)
    logger.debug(f"Sampled {n} logged records (replication {replication})")
    return data


def on_policy_rollout(env: SyntheticEnvironment, config: SyntheticConfig, n: int, replication: int = 0) -> LoggedDataset:
    """Draw n records whose actions come from the target policy (on-policy data)."""
    check_scalar(n, "n", numbers.Integral, min_val=1)
    rng = stream_rng(config.seed, ON_POLICY, replication)
    return _draw(env, config, n, rng, target_dist)


def ground_truth_value(
    env: SyntheticEnvironment,
    config: SyntheticConfig,
    m: int = GROUND_TRUTH_CONTEXTS,
    policy: Optional[Policy] = None,
) -> GroundTruth:
    """
    Monte-Carlo value of a policy over m fresh contexts.

    V = (1/m) sum_j sum_a pi(a|x_j) q(x_j, a), drawn from the dedicated
    ground-truth stream in chunks so that no m x |A| matrix is formed.
    ``policy`` defaults to the epsilon-greedy target policy.
    """
    check_scalar(m, "m", numbers.Integral, min_val=1)
    rng = stream_rng(config.seed, GROUND_TRUTH)
    chunk = max(1, _CHUNK_CELLS // env.num_actions)
    values = np.empty(m)
    for start in range(0, m, chunk):
        stop = min(m, start + chunk)
        context = rng.standard_normal((stop - start, config.context_dim))
        q = q_xa_batch(env, context)
        pi = target_dist(env, config, context) if policy is None else policy.action_dist(context)
        values[start:stop] = np.einsum("ij,ij->i", pi, q)
    stderr = float(values.std(ddof=1) / np.sqrt(m)) if m > 1 else 0.0
    result = GroundTruth(value=float(values.mean()), stderr=stderr, m=m)
    logger.info(f"Ground truth V(pi)={result.value:.6f} (se {result.stderr:.2e}, m={m})")
    return result


def true_marginal_weights(env: SyntheticEnvironment, config: SyntheticConfig, data: LoggedDataset) -> np.ndarray:
    """
    Exact marginal weights p(e_i|x_i,pi) / p(e_i|x_i,pi_0) over the observed dimensions.

    With withheld dimensions this is the true weight of the embedding the
    estimator actually sees, which no longer satisfies the no-direct-effect
    assumption.
    """
    likelihood = embedding_likelihood(env, data.embedding, data.observed_dims)
    return marginal_weights(
        target_dist(env, config, data.context),
        logging_dist(env, config, data.context),
        likelihood,
    )
