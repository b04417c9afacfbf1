import numpy as np
import pytest

from mipsbench.core import Distribution, EstimatorInputError, FixedPolicy, LoggedDataset
from mipsbench.estimators import (
    EstimateRecord,
    FixedRewardModel,
    dm,
    dr,
    ips,
    logged_weights,
    sample_mean,
    shrink_weights,
    shrunk_dr,
)
from mipsbench.synthgen import LoggingPolicy, SyntheticConfig, TargetPolicy, build_environment, sample_logged_data

TOLERANCE = 1e-12


def _problems(count=20, n=200):
    """Small synthetic datasets with a random reward model each."""
    config = SyntheticConfig(num_actions=15, context_dim=3, embed_dims=2, embed_cardinality=3, seed=21)
    env = build_environment(config)
    target = TargetPolicy(env, config.with_(epsilon=0.3))
    rng = np.random.default_rng(0)
    for t in range(count):
        data = sample_logged_data(env, config, n, replication=t)
        model = FixedRewardModel(q_xa=rng.standard_normal((n, config.num_actions)))
        yield data, target, model


def test_sample_mean_is_order_independent():
    terms = np.array([1e16, 1.0, -1e16, 3.0])

    assert sample_mean(terms) == 1.0
    assert sample_mean(terms[::-1]) == sample_mean(terms)
    with pytest.raises(EstimatorInputError):
        sample_mean(np.array([]))


def test_ips_on_policy_is_mean_reward():
    config = SyntheticConfig(num_actions=10, context_dim=3, embed_dims=2, embed_cardinality=3, seed=2)
    env = build_environment(config)
    data = sample_logged_data(env, config, 100)
    record = ips(data, LoggingPolicy(env, config))

    assert np.allclose(logged_weights(data, LoggingPolicy(env, config)), 1.0)
    assert abs(record.estimate - data.reward.mean()) < TOLERANCE


def test_record_keeps_terms():
    data, target, model = next(_problems(count=1))
    record = dm(data, target, model)

    assert isinstance(record, EstimateRecord)
    assert record.name == "dm"
    assert record.per_sample_terms.shape == (len(data),)
    assert not record.per_sample_terms.flags.writeable
    assert record.estimate == sample_mean(record.per_sample_terms)


def test_switch_and_os_at_zero_reduce_to_dm():
    for data, target, model in _problems():
        expected = dm(data, target, model).estimate

        assert abs(shrunk_dr(data, target, model, "switch", 0.0).estimate - expected) < TOLERANCE
        assert abs(shrunk_dr(data, target, model, "os", 0.0).estimate - expected) < TOLERANCE


def test_lambda_at_zero_reduces_to_dr():
    for data, target, model in _problems():
        expected = dr(data, target, model).estimate

        assert abs(shrunk_dr(data, target, model, "lambda", 0.0).estimate - expected) < TOLERANCE
        assert abs(shrunk_dr(data, target, model, "switch", np.inf).estimate - expected) < TOLERANCE
        assert abs(shrunk_dr(data, target, model, "os", np.inf).estimate - expected) < TOLERANCE


def test_lambda_at_one_uses_unit_weights():
    for data, target, model in _problems():
        q_xa = model.predict_xa(data)
        residual = data.reward - q_xa[np.arange(len(data)), data.action]
        expected = dm(data, target, model).estimate + residual.mean()

        assert abs(shrunk_dr(data, target, model, "lambda", 1.0).estimate - expected) < 1e-10


def test_dr_with_zero_model_equals_ips():
    for data, target, _ in _problems():
        zero = FixedRewardModel.zeros(len(data), data.num_actions)

        assert abs(dr(data, target, zero).estimate - ips(data, target).estimate) < TOLERANCE
        assert dm(data, target, zero).estimate == 0.0


def test_dr_is_named_after_model_provenance():
    data, target, model = next(_problems(count=1))
    mrdr_model = FixedRewardModel(q_xa=model.q_xa, provenance="mrdr")

    assert dr(data, target, model).name == "dr"
    assert dr(data, target, mrdr_model).name == "mrdr"


def test_shrink_weights_examples():
    weights = np.array([0.0, 0.5, 2.0, 8.0])

    assert np.array_equal(shrink_weights(weights, "switch", 2.0), [0.0, 0.5, 2.0, 0.0])
    assert np.allclose(shrink_weights(weights, "os", 4.0), [0.0, 2.0 / 4.25, 1.0, 32.0 / 68.0])
    assert np.allclose(shrink_weights(weights, "lambda", 0.5), [0.0, 0.5 / 0.75, 2.0 / 1.5, 8.0 / 4.5])


def test_shrink_weights_rejects_bad_arguments():
    weights = np.ones(3)

    with pytest.raises(ValueError):
        shrink_weights(weights, "switch", -1.0)
    with pytest.raises(ValueError):
        shrink_weights(weights, "lambda", 1.5)
    with pytest.raises(EstimatorInputError):
        shrink_weights(weights, "clip", 1.0)


def test_fixed_model_shape_is_checked():
    data, target, _ = next(_problems(count=1))
    model = FixedRewardModel(q_xa=np.zeros((3, data.num_actions)))

    with pytest.raises(EstimatorInputError):
        dm(data, target, model)
    with pytest.raises(EstimatorInputError):
        FixedRewardModel(q_xa=np.array([[np.nan]]))


def test_fixed_policy_ips_example():
    # Two actions, uniform logging, target always plays action 1.
    data = LoggedDataset(
        context=np.zeros((4, 1)),
        action=np.array([0, 1, 1, 0]),
        embedding=np.zeros((4, 1), dtype=int),
        reward=np.array([1.0, 2.0, 4.0, 8.0]),
        pscore=np.full(4, 0.5),
        embedding_cardinalities=(1,),
        num_actions=2,
    )
    target = FixedPolicy(Distribution([0.0, 1.0]))

    assert ips(data, target).estimate == 3.0
