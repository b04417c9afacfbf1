"""
Finite probability distributions and the two policy families used throughout.

A Distribution is a dense, immutable probability vector over a finite index
set. It houses every discrete distribution in the system: pi(a|x),
pi_0(a|x), p(e|x,a), p(e|x,pi) and pi_0(a|x,e).

The single-context operations (softmax_policy, epsilon_greedy_policy)
return Distributions; the ``*_rows`` variants apply the same rule to a
matrix of contexts at once and are what the simulator and estimators use.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import softmax
from sklearn.utils import check_scalar

from .errors import InvalidEnvironmentError


SUM_TOLERANCE = 1e-9
DENORMAL_FLOOR = 1e-300


@dataclass(frozen=True)
class Distribution:
    """
    A probability vector over ``range(len(probs))``.

    Attributes:
        probs: Non-negative entries summing to one (within 1e-9). The
            array is copied and made read-only on construction.

    Raises:
        InvalidEnvironmentError: If the vector is empty, not 1-D, contains
            negative or non-finite entries, or does not sum to one.
    """

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise InvalidEnvironmentError(f"distribution must be a non-empty vector, got shape {probs.shape}")
        if not np.all(np.isfinite(probs)):
            raise InvalidEnvironmentError("distribution contains non-finite entries")
        if np.any(probs < 0):
            raise InvalidEnvironmentError("distribution contains negative entries")
        total = float(probs.sum())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidEnvironmentError(f"distribution sums to {total!r}, expected 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def __len__(self) -> int:
        return self.probs.size

    def __getitem__(self, index: int) -> float:
        return float(self.probs[index])

    @property
    def support(self) -> np.ndarray:
        """Indices with strictly positive probability."""
        return np.flatnonzero(self.probs > 0)


def _check_finite(values: np.ndarray, name: str) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise InvalidEnvironmentError(f"{name} contains non-finite values")
    return values


def softmax_rows(scores: np.ndarray, beta: float) -> np.ndarray:
    """
    Row-wise softmax of ``beta * scores`` with denormal clamping.

    Args:
        scores: Array of shape (n, K) (or (K,)) of finite scores.
        beta: Inverse temperature. ``beta=0`` gives the uniform distribution;
            negative values favour low scores.

    Returns:
        Array of the same shape whose rows sum to one. Entries below 1e-300
        are set to zero and the row is renormalised.

    Raises:
        InvalidEnvironmentError: If any score is non-finite.
    """
    scores = _check_finite(scores, "scores")
    probs = softmax(beta * scores, axis=-1)
    probs = np.where(probs < DENORMAL_FLOOR, 0.0, probs)
    return probs / probs.sum(axis=-1, keepdims=True)


def softmax_policy(scores: np.ndarray, beta: float) -> Distribution:
    """
    Softmax policy ``probs[a] ∝ exp(beta * scores[a])``.

    Example:
        >>> softmax_policy(np.array([1.0, 2.0, 3.0]), beta=0.0).probs
        array([0.33333333, 0.33333333, 0.33333333])
    """
    return Distribution(softmax_rows(np.asarray(scores, dtype=float).ravel(), beta))


def epsilon_greedy_rows(q_values: np.ndarray, epsilon: float) -> np.ndarray:
    """
    Row-wise epsilon-greedy distribution ``(1 - eps) * 1{a = argmax} + eps / K``.

    Ties in the argmax go to the lowest index.

    Raises:
        ValueError: If epsilon lies outside [0, 1].
        InvalidEnvironmentError: If any q value is non-finite.
    """
    check_scalar(epsilon, "epsilon", (int, float), min_val=0.0, max_val=1.0)
    q_values = _check_finite(q_values, "q_values")
    squeeze = q_values.ndim == 1
    q = np.atleast_2d(q_values)
    num_actions = q.shape[1]
    probs = np.full(q.shape, epsilon / num_actions)
    probs[np.arange(q.shape[0]), np.argmax(q, axis=1)] += 1.0 - epsilon
    return probs[0] if squeeze else probs


def epsilon_greedy_policy(q_values: np.ndarray, epsilon: float) -> Distribution:
    """
    Epsilon-greedy policy over a single vector of action values.

    Example:
        >>> epsilon_greedy_policy(np.array([1.0, 3.0, 2.0]), 0.3).probs
        array([0.1, 0.8, 0.1])
    """
    return Distribution(epsilon_greedy_rows(np.asarray(q_values, dtype=float).ravel(), epsilon))


def sample_categorical(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Draw one index per row of ``probs`` by inverse-CDF sampling.

    Args:
        probs: Array of shape (n, K) whose rows are distributions.
        rng: Source of uniforms; exactly ``n`` draws are consumed.

    Returns:
        Integer array of shape (n,). Zero-probability indices are never drawn.
    """
    cdf = np.cumsum(probs, axis=1)
    # u < cdf[:, -1] strictly, so the first index with cdf > u always has positive mass
    u = rng.random(probs.shape[0]) * cdf[:, -1]
    return (cdf <= u[:, None]).sum(axis=1).astype(np.int64)
