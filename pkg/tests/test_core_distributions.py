import numpy as np
import pytest

from mipsbench.core import (
    Distribution,
    InvalidEnvironmentError,
    epsilon_greedy_policy,
    epsilon_greedy_rows,
    sample_categorical,
    softmax_policy,
    softmax_rows,
)


def test_distribution_rejects_bad_vectors():
    for probs in ([], [0.5, 0.6], [1.5, -0.5], [np.nan, 1.0]):
        with pytest.raises(InvalidEnvironmentError):
            Distribution(probs)


def test_distribution_support_and_indexing():
    dist = Distribution([0.0, 0.25, 0.75])
    print("support:", dist.support)

    assert len(dist) == 3
    assert dist[2] == 0.75
    assert dist.support.tolist() == [1, 2]


def test_softmax_with_zero_beta_is_uniform():
    probs = softmax_policy(np.array([1.0, 2.0, 3.0]), beta=0.0).probs
    print("beta=0:", probs)

    assert np.allclose(probs, 1 / 3, atol=1e-15)


def test_softmax_of_equal_scores_is_symmetric():
    assert np.allclose(softmax_policy(np.array([0.0, 0.0]), beta=5.0).probs, [0.5, 0.5])


def test_softmax_matches_hand_evaluation():
    expected = np.array([np.e, np.e**2]) / (np.e + np.e**2)
    probs = softmax_policy(np.array([1.0, 2.0]), beta=1.0).probs
    print("softmax (1, 2):", probs, expected)

    assert np.allclose(probs, expected, rtol=0, atol=1e-15)


def test_softmax_is_stable_for_large_scores():
    probs = softmax_rows(np.array([[1000.0, 1001.0, -5000.0]]), beta=1.0)

    assert np.all(np.isfinite(probs))
    assert probs[0, 2] == 0.0
    assert abs(probs.sum() - 1.0) < 1e-12


def test_softmax_rejects_non_finite_scores():
    with pytest.raises(InvalidEnvironmentError):
        softmax_policy(np.array([1.0, np.inf]), beta=1.0)


def test_epsilon_greedy_examples():
    q = np.array([1.0, 3.0, 2.0])

    assert epsilon_greedy_policy(q, 0.0).probs.tolist() == [0.0, 1.0, 0.0]
    assert np.allclose(epsilon_greedy_policy(q, 1.0).probs, 1 / 3)
    assert np.allclose(epsilon_greedy_policy(q, 0.3).probs, [0.1, 0.8, 0.1], atol=1e-15)


def test_epsilon_greedy_breaks_ties_by_lowest_index():
    probs = epsilon_greedy_rows(np.array([[2.0, 2.0, 1.0]]), 0.0)

    assert probs[0].tolist() == [1.0, 0.0, 0.0]


def test_epsilon_greedy_rejects_out_of_range_epsilon():
    with pytest.raises(ValueError):
        epsilon_greedy_policy(np.array([1.0, 2.0]), 1.5)
    with pytest.raises(ValueError):
        epsilon_greedy_policy(np.array([1.0, 2.0]), -0.1)


def test_sample_categorical_never_draws_zero_mass():
    rng = np.random.default_rng(0)
    probs = np.tile([0.0, 0.3, 0.0, 0.7], (5000, 1))
    draws = sample_categorical(probs, rng)
    counts = np.bincount(draws, minlength=4)
    print("counts:", counts)

    assert counts[0] == 0 and counts[2] == 0
    assert abs(counts[3] / 5000 - 0.7) < 0.03
