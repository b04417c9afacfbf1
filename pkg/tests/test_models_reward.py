import itertools

import numpy as np
import pytest

from mipsbench.core import EstimatorInputError
from mipsbench.models import (
    RidgeHyper,
    design_matrix,
    fit_mrdr_reward_model,
    fit_reward_model,
    make_cross_fit_plan,
)
from mipsbench.synthgen import LoggingPolicy, SyntheticConfig, TargetPolicy, build_environment, sample_logged_data


def _setup(n=300):
    config = SyntheticConfig(num_actions=5, context_dim=3, embed_dims=2, embed_cardinality=3, seed=23)
    env = build_environment(config)
    return config, env, sample_logged_data(env, config, n)


def test_plan_assigns_every_record_once():
    plan = make_cross_fit_plan(11, folds=3, seed=1)
    print("assignment:", plan.assignment)

    assert len(plan) == 11
    assert sorted(np.concatenate([plan.test_indices(f) for f in range(3)]).tolist()) == list(range(11))
    assert np.array_equal(plan.assignment, make_cross_fit_plan(11, folds=3, seed=1).assignment)
    with pytest.raises(ValueError):
        make_cross_fit_plan(3, folds=2)


def test_prediction_ignores_own_reward():
    _, _, data = _setup()
    plan = make_cross_fit_plan(len(data), 2, seed=0)
    base = fit_reward_model(data, plan=plan).predict_xe(data)

    reward = data.reward.copy()
    reward[7] += 1000.0
    changed_data = type(data)(
        context=data.context,
        action=data.action,
        embedding=data.embedding,
        reward=reward,
        pscore=data.pscore,
        embedding_cardinalities=data.embedding_cardinalities,
        num_actions=data.num_actions,
    )
    changed = fit_reward_model(changed_data, plan=plan).predict_xe(changed_data)
    same_fold = plan.test_indices(plan.assignment[7])

    assert np.array_equal(base[same_fold], changed[same_fold])
    assert not np.array_equal(base, changed)


def test_predict_xa_marginalises_predict_over_embeddings():
    _, env, data = _setup()
    embed_probs = env.embed_probabilities()
    model = fit_reward_model(data, embed_probs=embed_probs)
    q_xa = model.predict_xa(data)

    i = 0
    ridge = model.fold_models[model.plan.assignment[i]]
    for a in range(data.num_actions):
        expected = 0.0
        for e in itertools.product(range(3), repeat=2):
            prob = embed_probs[0][a, e[0]] * embed_probs[1][a, e[1]]
            X = design_matrix(data.context[i : i + 1], np.array([e]), (0, 1), (3, 3), bias=False)
            expected += prob * ridge.predict(X)[0]

        assert abs(q_xa[i, a] - expected) < 1e-10


def test_mrdr_on_policy_equals_plain_fit():
    config, env, data = _setup()
    plan = make_cross_fit_plan(len(data), 2, seed=0)
    plain = fit_reward_model(data, plan=plan)
    mrdr = fit_mrdr_reward_model(data, LoggingPolicy(env, config), plan=plan)

    assert mrdr.provenance == "mrdr"
    assert np.array_equal(plain.predict_xe(data), mrdr.predict_xe(data))
    assert np.array_equal(plain.predict_xa(data), mrdr.predict_xa(data))


def test_mrdr_off_policy_differs_from_plain_fit():
    config, env, data = _setup()
    plan = make_cross_fit_plan(len(data), 2, seed=0)
    plain = fit_reward_model(data, plan=plan)
    mrdr = fit_mrdr_reward_model(data, TargetPolicy(env, config), plan=plan)

    assert not np.allclose(plain.predict_xe(data), mrdr.predict_xe(data))


def test_noiseless_linear_reward_is_recovered():
    config = SyntheticConfig(num_actions=5, context_dim=3, embed_dims=2, embed_cardinality=3, reward_noise=0.0, seed=5)
    env = build_environment(config)
    data = sample_logged_data(env, config, 2000)
    model = fit_reward_model(data, hyper=RidgeHyper(l2=0.0))
    residual = data.reward - model.predict_xe(data)

    # q(x, e) has x-by-embedding interactions, which the additive model cannot fit exactly
    assert np.mean(residual**2) < np.var(data.reward)


def test_bad_sample_weights_are_rejected():
    _, _, data = _setup()

    with pytest.raises(EstimatorInputError):
        fit_reward_model(data, sample_weight=-np.ones(len(data)))
    with pytest.raises(EstimatorInputError):
        fit_reward_model(data, plan=make_cross_fit_plan(10, 2))


def test_mrdr_fit_minimises_its_weighted_objective():
    config, env, data = _setup()
    target = TargetPolicy(env, config)
    plan = make_cross_fit_plan(len(data), 2, seed=0)
    plain = fit_reward_model(data, plan=plan)
    mrdr = fit_mrdr_reward_model(data, target, plan=plan)
    weights = (target.action_dist(data.context)[np.arange(len(data)), data.action] / data.pscore) ** 2
    X = design_matrix(data.context, data.embedding, (0, 1), (3, 3), bias=False)

    for fold in range(2):
        train = plan.train_indices(fold)

        def objective(ridge):
            residual = data.reward[train] - ridge.predict(X[train])
            return np.sum(weights[train] * residual**2) + ridge.alpha * np.sum(ridge.coef_**2)

        assert objective(mrdr.fold_models[fold]) <= objective(plain.fold_models[fold]) * (1 + 1e-9)
