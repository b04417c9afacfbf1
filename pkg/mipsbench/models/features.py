"""
Feature maps shared by the action posterior and the reward regressors.

Features are context ⊕ one-hot(e_k) for the selected dimensions k (⊕ a
constant column when the learner has no intercept of its own). There are
no context-embedding interactions, so a linear model is additive across
embedding dimensions and q_hat(x, a) follows from q_hat(x, e) by swapping
each one-hot block for p(e_k | a).
"""

from typing import List, Sequence, Tuple

import numpy as np

from ..core.errors import EstimatorInputError


def check_dims(dims: Sequence[int], available: Sequence[int]) -> Tuple[int, ...]:
    """Validate a non-empty embedding-dimension subset of ``available``."""
    dims = tuple(int(k) for k in dims)
    if not dims:
        raise EstimatorInputError("at least one embedding dimension is required")
    if len(set(dims)) != len(dims) or not set(dims) <= set(available):
        raise EstimatorInputError(f"embedding dims {dims} must be distinct members of {tuple(available)}")
    return dims


def one_hot_embedding(embedding: np.ndarray, dims: Sequence[int], cardinalities: Sequence[int]) -> np.ndarray:
    """(n, sum_k |E_k|) concatenated one-hot blocks of the selected dimensions."""
    embedding = np.atleast_2d(np.asarray(embedding, dtype=np.int64))
    n = embedding.shape[0]
    blocks = []
    for k in dims:
        block = np.zeros((n, cardinalities[k]))
        block[np.arange(n), embedding[:, k]] = 1.0
        blocks.append(block)
    return np.hstack(blocks) if blocks else np.zeros((n, 0))


def design_matrix(
    context: np.ndarray,
    embedding: np.ndarray,
    dims: Sequence[int],
    cardinalities: Sequence[int],
    bias: bool = True,
) -> np.ndarray:
    """
    Context ⊕ one-hot embedding blocks (⊕ a ones column when ``bias``).

    Example:
        >>> design_matrix(np.zeros((1, 2)), np.array([[1, 0]]), [0], [3, 2]).tolist()
        [[0.0, 0.0, 0.0, 1.0, 0.0, 1.0]]
    """
    context = np.atleast_2d(np.asarray(context, dtype=float))
    parts = [context, one_hot_embedding(embedding, dims, cardinalities)]
    if bias:
        parts.append(np.ones((context.shape[0], 1)))
    return np.hstack(parts)


def block_slices(context_dim: int, dims: Sequence[int], cardinalities: Sequence[int]) -> List[slice]:
    """Column slice of each selected dimension's one-hot block in ``design_matrix``."""
    slices = []
    start = context_dim
    for k in dims:
        slices.append(slice(start, start + cardinalities[k]))
        start += cardinalities[k]
    return slices


def embedding_frequencies(action: np.ndarray, values: np.ndarray, num_actions: int, cardinality: int) -> np.ndarray:
    """
    (|A|, |E_k|) empirical per-action frequencies of one embedding dimension.

    Actions that never occur get the overall frequency of the sample.
    """
    counts = np.zeros((num_actions, cardinality))
    np.add.at(counts, (np.asarray(action), np.asarray(values)), 1.0)
    totals = counts.sum(axis=1, keepdims=True)
    overall = counts.sum(axis=0) / counts.sum()
    return np.where(totals > 0, counts / np.maximum(totals, 1.0), overall[None, :])
