import numpy as np
import pytest

from mipsbench.synthgen import (
    SyntheticConfig,
    build_environment,
    ground_truth_value,
    on_policy_rollout,
    q_xa_batch,
    q_xe_batch,
    sample_logged_data,
    true_marginal_weights,
)
from mipsbench.synthgen.seeding import GROUND_TRUTH, stream_rng


def _config(**changes):
    fields = dict(num_actions=30, context_dim=4, embed_dims=3, embed_cardinality=4, seed=11)
    fields.update(changes)
    return SyntheticConfig(**fields)


def test_noiseless_rewards_equal_expected_rewards():
    config = _config(reward_noise=0.0)
    env = build_environment(config)
    data = sample_logged_data(env, config, 200)

    assert np.array_equal(data.reward, q_xe_batch(env, data.context, data.embedding))


def test_sampling_is_deterministic_per_replication():
    config = _config()
    env = build_environment(config)
    first = sample_logged_data(env, config, 50, replication=3)
    second = sample_logged_data(env, config, 50, replication=3)
    other = sample_logged_data(env, config, 50, replication=4)

    assert np.array_equal(first.reward, second.reward)
    assert np.array_equal(first.action, second.action)
    assert not np.array_equal(first.context, other.context)


def test_logged_actions_avoid_deficient_set():
    config = _config(num_deficient_actions=20)
    env = build_environment(config)
    data = sample_logged_data(env, config, 500)

    assert not np.isin(data.action, env.deficient_set).any()
    assert np.all(data.pscore > 0)


def test_withheld_dims_stay_in_records():
    config = _config(withheld_dims=(2,))
    env = build_environment(config)
    data = sample_logged_data(env, config, 20)

    assert data.embedding.shape == (20, 3)
    assert data.observed_dims == (0, 1)


def test_ground_truth_single_greedy_context():
    config = _config(epsilon=0.0)
    env = build_environment(config)
    truth = ground_truth_value(env, config, m=1)
    x = stream_rng(config.seed, GROUND_TRUTH).standard_normal((1, config.context_dim))

    assert abs(truth.value - q_xa_batch(env, x).max()) < 1e-12
    assert truth.stderr == 0.0


def test_ground_truth_is_independent_of_data_sampling():
    config = _config()
    env = build_environment(config)
    before = ground_truth_value(env, config, m=1000)
    sample_logged_data(env, config, 100)
    after = ground_truth_value(env, config, m=1000)

    assert before == after


def test_ground_truth_agrees_with_on_policy_rollouts():
    config = _config()
    env = build_environment(config)
    truth = ground_truth_value(env, config, m=200_000)
    rollout = on_policy_rollout(env, config, 200_000)
    stderr = rollout.reward.std(ddof=1) / np.sqrt(len(rollout))
    print("truth vs rollout:", truth.value, rollout.reward.mean(), stderr)

    assert abs(truth.value - rollout.reward.mean()) <= 3 * np.hypot(stderr, truth.stderr)


def test_true_marginal_weights_are_one_on_policy():
    config = _config(beta=0.0, epsilon=1.0)
    env = build_environment(config)
    data = sample_logged_data(env, config, 100)

    assert np.allclose(true_marginal_weights(env, config, data), 1.0)


def test_sample_rejects_empty_request():
    config = _config()
    env = build_environment(config)

    with pytest.raises(ValueError):
        sample_logged_data(env, config, 0)
