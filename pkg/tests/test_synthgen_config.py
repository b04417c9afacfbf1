import pytest

from mipsbench.synthgen import SyntheticConfig
from mipsbench.synthgen.seeding import DATA, ENVIRONMENT, stream_rng, stream_seed


def test_defaults():
    config = SyntheticConfig()

    assert config.num_actions == 1000
    assert config.context_dim == 10
    assert config.beta == -1.0
    assert config.epsilon == 0.05
    assert config.reward_noise == 2.5
    assert config.embedding_cardinalities == (10, 10, 10)


def test_invalid_fields_are_rejected():
    with pytest.raises(ValueError):
        SyntheticConfig(num_actions=1)
    with pytest.raises(ValueError):
        SyntheticConfig(num_actions=5, num_deficient_actions=5)
    with pytest.raises(ValueError):
        SyntheticConfig(embed_dims=2, withheld_dims=(2,))
    with pytest.raises(ValueError):
        SyntheticConfig(reward_noise=-1.0)


def test_withheld_dims_are_normalised():
    config = SyntheticConfig(embed_dims=4, withheld_dims=(3, 1, 3))

    assert config.withheld_dims == (1, 3)


def test_dict_round_trip():
    config = SyntheticConfig(num_actions=50, withheld_dims=(0,), seed=3)

    assert SyntheticConfig.from_dict(config.to_dict()) == config


def test_streams_are_independent_and_reproducible():
    assert stream_rng(5, DATA, 1).random() == stream_rng(5, DATA, 1).random()
    assert stream_rng(5, DATA, 1).random() != stream_rng(5, DATA, 2).random()
    assert stream_rng(5, DATA).random() != stream_rng(5, ENVIRONMENT).random()
    assert stream_seed(5, DATA, 1) == stream_seed(5, DATA, 1)
