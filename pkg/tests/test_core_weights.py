import numpy as np
import pytest

from mipsbench.core import (
    DeficientEmbeddingSupportError,
    DeficientSupportError,
    Distribution,
    embedding_marginal,
    logging_posterior,
    marginal_weight_true,
    marginal_weights,
    vanilla_weight,
    vanilla_weights,
)

# three actions, three embeddings
TOY_TARGET = Distribution([0.2, 0.8, 0.0])
TOY_LOGGING = Distribution([0.0, 0.2, 0.8])
TOY_EMBEDDINGS = [
    Distribution([0.25, 0.25, 0.5]),
    Distribution([0.5, 0.25, 0.25]),
    Distribution([0.25, 0.5, 0.25]),
]


def _random_dist(rng, size):
    return Distribution(rng.dirichlet(np.ones(size)))


def test_vanilla_weight_toy_values():
    assert vanilla_weight(TOY_TARGET, TOY_LOGGING, 1) == 4.0
    assert vanilla_weight(TOY_TARGET, TOY_LOGGING, 2) == 0.0


def test_vanilla_weight_on_policy_is_one():
    dist = Distribution([0.1, 0.6, 0.3])

    assert [vanilla_weight(dist, dist, a) for a in range(3)] == [1.0, 1.0, 1.0]


def test_vanilla_weight_names_deficient_action():
    with pytest.raises(DeficientSupportError) as excinfo:
        vanilla_weight(TOY_TARGET, TOY_LOGGING, 0)
    print("error:", excinfo.value)

    assert excinfo.value.action == 0
    assert isinstance(excinfo.value, ZeroDivisionError)


def test_marginal_weight_toy_values():
    weights = [marginal_weight_true(TOY_TARGET, TOY_LOGGING, TOY_EMBEDDINGS, e) for e in range(3)]
    print("toy marginal weights:", weights)

    assert abs(weights[0] - 1.5) < 1e-12
    assert abs(weights[1] - 0.25 / 0.45) < 1e-12
    assert abs(weights[2] - 1.2) < 1e-12
    assert max(weights) < vanilla_weight(TOY_TARGET, TOY_LOGGING, 1)


def test_marginal_weight_on_policy_is_one():
    for e in range(3):
        assert abs(marginal_weight_true(TOY_LOGGING, TOY_LOGGING, TOY_EMBEDDINGS, e) - 1.0) < 1e-12


def test_marginal_weight_rejects_unsupported_embedding():
    embed_model = [Distribution([1.0, 0.0]), Distribution([1.0, 0.0])]

    with pytest.raises(DeficientEmbeddingSupportError):
        marginal_weight_true(Distribution([0.5, 0.5]), Distribution([0.5, 0.5]), embed_model, 1)


def test_weights_average_to_one_under_logging_policy():
    rng = np.random.default_rng(1)
    for _ in range(20):
        pi, pi0 = _random_dist(rng, 5), _random_dist(rng, 5)
        embed_model = [_random_dist(rng, 4) for _ in range(5)]
        action_sum = sum(pi0[a] * vanilla_weight(pi, pi0, a) for a in range(5))
        logging_marginal = embedding_marginal(pi0, embed_model)
        embed_sum = sum(logging_marginal[e] * marginal_weight_true(pi, pi0, embed_model, e) for e in range(4))

        assert abs(action_sum - 1.0) < 1e-9
        assert abs(embed_sum - 1.0) < 1e-9


def test_marginal_weight_is_posterior_average_of_vanilla_weights():
    rng = np.random.default_rng(2)
    for _ in range(20):
        pi, pi0 = _random_dist(rng, 6), _random_dist(rng, 6)
        embed_model = [_random_dist(rng, 3) for _ in range(6)]
        for e in range(3):
            post = logging_posterior(pi0, embed_model, e)
            averaged = sum(post[a] * vanilla_weight(pi, pi0, a) for a in range(6))

            assert abs(averaged - marginal_weight_true(pi, pi0, embed_model, e)) < 1e-9


def test_vectorised_weights_match_scalar_versions():
    rng = np.random.default_rng(3)
    target = rng.dirichlet(np.ones(4), size=6)
    logging_dist = rng.dirichlet(np.ones(4), size=6)
    actions = rng.integers(0, 4, size=6)
    likelihood = rng.uniform(0.1, 1.0, size=(6, 4))
    vanilla = vanilla_weights(target, logging_dist[np.arange(6), actions], actions)
    marginal = marginal_weights(target, logging_dist, likelihood)

    for i in range(6):
        assert abs(vanilla[i] - target[i, actions[i]] / logging_dist[i, actions[i]]) < 1e-12
        assert abs(marginal[i] - target[i] @ likelihood[i] / (logging_dist[i] @ likelihood[i])) < 1e-12
