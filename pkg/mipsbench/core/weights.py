"""
Importance-weight arithmetic.

Vanilla weights w(x,a) = pi(a|x) / pi_0(a|x) and marginal weights
w(x,e) = p(e|x,pi) / p(e|x,pi_0), where p(e|x,pi) = sum_a pi(a|x) p(e|x,a).
Marginal weights can equivalently be written as the posterior average
E_{pi_0(a|x,e)}[w(x,a)]; ``logging_posterior`` computes that posterior by
Bayes' rule.
"""

from typing import Sequence

import numpy as np

from .distributions import Distribution
from .errors import DeficientEmbeddingSupportError, DeficientSupportError, EstimatorInputError


def vanilla_weight(target: Distribution, logging_policy: Distribution, action: int) -> float:
    """
    Vanilla importance weight pi(a|x) / pi_0(a|x) for one action.

    Args:
        target: Target policy distribution at context x.
        logging_policy: Logging policy distribution at context x.
        action: Action id.

    Returns:
        The non-negative weight.

    Raises:
        DeficientSupportError: If the logging policy gives the action zero probability.

    Example:
        >>> vanilla_weight(Distribution([0.2, 0.8, 0.0]), Distribution([0.0, 0.2, 0.8]), 1)
        4.0
    """
    denominator = logging_policy[action]
    if denominator <= 0.0:
        raise DeficientSupportError(action)
    return target[action] / denominator


def embedding_marginal(policy: Distribution, embed_model: Sequence[Distribution]) -> np.ndarray:
    """Marginal p(e|x,policy) = sum_a policy(a|x) p(e|x,a) over a flat embedding space."""
    likelihood = np.vstack([d.probs for d in embed_model])
    return policy.probs @ likelihood


def marginal_weight_true(
    target: Distribution,
    logging_policy: Distribution,
    embed_model: Sequence[Distribution],
    embedding: int,
) -> float:
    """
    Exact marginal importance weight p(e|x,pi) / p(e|x,pi_0).

    Args:
        target: Target policy at x, over A.
        logging_policy: Logging policy at x, over A.
        embed_model: One distribution over E per action, i.e. p(.|x,a).
        embedding: Index of the embedding value in the flat space E.

    Raises:
        DeficientEmbeddingSupportError: If p(e|x,pi_0) is zero.

    Example:
        The three-action toy example gives 0.45 / 0.30 = 1.5 for e_1.
    """
    if len(embed_model) != len(target) or len(target) != len(logging_policy):
        raise EstimatorInputError("target, logging policy and embedding model disagree on |A|")
    numerator = float(embedding_marginal(target, embed_model)[embedding])
    denominator = float(embedding_marginal(logging_policy, embed_model)[embedding])
    if denominator <= 0.0:
        raise DeficientEmbeddingSupportError((embedding,))
    return numerator / denominator


def logging_posterior(logging_policy: Distribution, embed_model: Sequence[Distribution], embedding: int) -> Distribution:
    """
    pi_0(a|x,e) = p(e|x,a) pi_0(a|x) / p(e|x,pi_0).

    Raises:
        DeficientEmbeddingSupportError: If p(e|x,pi_0) is zero.
    """
    joint = logging_policy.probs * np.array([d[embedding] for d in embed_model])
    total = joint.sum()
    if total <= 0.0:
        raise DeficientEmbeddingSupportError((embedding,))
    return Distribution(joint / total)


def vanilla_weights(target_dist: np.ndarray, pscore: np.ndarray, actions: np.ndarray) -> np.ndarray:
    """
    Per-record vanilla weights pi(a_i|x_i) / pscore_i.

    Args:
        target_dist: (n, |A|) target probabilities at the logged contexts.
        pscore: (n,) logged propensities pi_0(a_i|x_i), all positive.
        actions: (n,) logged actions.
    """
    pscore = np.asarray(pscore, dtype=float)
    if np.any(pscore <= 0):
        bad = int(np.asarray(actions)[np.argmax(pscore <= 0)])
        raise DeficientSupportError(bad)
    return target_dist[np.arange(len(actions)), actions] / pscore


def marginal_weights(target_dist: np.ndarray, logging_dist: np.ndarray, likelihood: np.ndarray) -> np.ndarray:
    """
    Per-record marginal weights from embedding likelihoods.

    Args:
        target_dist: (n, |A|) target probabilities pi(a|x_i).
        logging_dist: (n, |A|) logging probabilities pi_0(a|x_i).
        likelihood: (n, |A|) matrix of p(e_i|x_i,a) for the logged embeddings.

    Returns:
        (n,) weights p(e_i|x_i,pi) / p(e_i|x_i,pi_0).

    Raises:
        DeficientEmbeddingSupportError: If some logged embedding has zero
            logging marginal (cannot happen for data drawn from pi_0).
    """
    numerator = np.einsum("ij,ij->i", target_dist, likelihood)
    denominator = np.einsum("ij,ij->i", logging_dist, likelihood)
    if np.any(denominator <= 0):
        row = int(np.argmax(denominator <= 0))
        raise DeficientEmbeddingSupportError((row,), f"logged record {row} has zero logging embedding marginal")
    return numerator / denominator
