import numpy as np
import pytest

from mipsbench.core import Distribution, EstimatorInputError, FixedPolicy, LoggedDataset
from mipsbench.estimators import FixedRewardModel, dm, ips, mips
from mipsbench.synthgen import (
    SyntheticConfig,
    TargetPolicy,
    build_environment,
    ground_truth_value,
    sample_logged_data,
    true_marginal_weights,
)


def _two_records(action=(0, 1), reward=(2.0, 0.0)):
    return LoggedDataset(
        context=np.zeros((2, 1)),
        action=np.array(action),
        embedding=np.zeros((2, 1), dtype=int),
        reward=np.array(reward),
        pscore=np.full(2, 0.5),
        embedding_cardinalities=(1,),
        num_actions=2,
    )


def test_mips_example():
    assert mips(_two_records(), [1.5, 0.55]).estimate == 1.5


def test_dm_example():
    data = _two_records()
    target = FixedPolicy(Distribution([0.3, 0.7]))
    model = FixedRewardModel(q_xa=np.tile([1.0, 2.0], (2, 1)))

    assert abs(dm(data, target, model).estimate - 1.7) < 1e-12


def test_ips_example():
    data = _two_records(reward=(1.0, 5.0))

    assert ips(data, FixedPolicy(Distribution([1.0, 0.0]))).estimate == 1.0


def test_unit_weights_give_mean_reward():
    config = SyntheticConfig(num_actions=10, context_dim=3, embed_dims=2, embed_cardinality=3, seed=4)
    data = sample_logged_data(build_environment(config), config, 50)

    assert abs(mips(data, np.ones(len(data))).estimate - data.reward.mean()) < 1e-12


def test_mips_is_permutation_invariant():
    config = SyntheticConfig(num_actions=20, context_dim=3, embed_dims=3, embed_cardinality=4, seed=8)
    env = build_environment(config)
    data = sample_logged_data(env, config, 300)
    weights = true_marginal_weights(env, config, data)
    order = np.random.default_rng(0).permutation(len(data))

    assert mips(data, weights).estimate == mips(data.subset(order), weights[order]).estimate


@pytest.mark.parametrize(
    "weights",
    [
        [1.0],
        [1.0, np.nan],
        [1.0, -0.1],
    ],
)
def test_mips_rejects_bad_weights(weights):
    with pytest.raises(EstimatorInputError):
        mips(_two_records(), weights)


def test_record_name_is_configurable():
    assert mips(_two_records(), [1.0, 1.0], name="mips-true").name == "mips-true"


@pytest.mark.slow
def test_mips_with_true_weights_is_unbiased():
    config = SyntheticConfig(num_actions=50, context_dim=3, embed_dims=3, embed_cardinality=5, seed=11)
    env = build_environment(config)
    truth = ground_truth_value(env, config, 200_000)
    estimates = []
    for t in range(300):
        data = sample_logged_data(env, config, 200, replication=t)
        estimates.append(mips(data, true_marginal_weights(env, config, data)).estimate)
    estimates = np.array(estimates)
    stderr = np.sqrt(estimates.var(ddof=1) / estimates.size + truth.stderr**2)
    print("mean estimate:", estimates.mean(), "truth:", truth.value, "se:", stderr)

    assert abs(estimates.mean() - truth.value) < 3.5 * stderr
