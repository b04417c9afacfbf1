import numpy as np
import pytest

from mipsbench.core import marginal_weights
from mipsbench.estimators import ips, mips
from mipsbench.oracle import (
    OracleCheck,
    TabularPolicy,
    exact_ips_deficiency_bias,
    exact_value,
    random_instance,
    run_oracle_checks,
    sample_tabular,
    simulate_single_sample_terms,
    to_logged_dataset,
    toy_instance,
)
from mipsbench.oracle.checks import IDENTITY_TOL, PAIRWISE_TOL

IDENTITY_CHECKS = {
    "pairwise_difference_identity",
    "toy_example_weights",
    "mips_bias_closed_form",
    "variance_reduction_closed_form",
    "variance_reduction_non_negative",
    "mse_gain_closed_form",
    "estimated_weight_bias",
    "estimated_weight_variance",
    "deficient_embedding_bias",
    "ips_deficiency_bias",
}

SIMULATED_CHECKS = {
    "mips_bias_simulated",
    "estimated_weight_bias_simulated",
    "deficient_embedding_bias_simulated",
    "ips_deficiency_bias_simulated",
}


def test_run_oracle_checks_reports_every_property():
    checks = run_oracle_checks(seed=0, num_instances=5, simulation_draws=5_000, simulated_instances=2)
    for check in checks:
        print(check)

    assert all(isinstance(check, OracleCheck) for check in checks)
    assert IDENTITY_CHECKS <= {check.name for check in checks}
    assert SIMULATED_CHECKS <= {check.name for check in checks}
    assert all(check.passed for check in checks if check.name in IDENTITY_CHECKS)


def test_sampled_moments_match_instance():
    inst = random_instance(np.random.default_rng(0), reward_family="gaussian")
    sample = sample_tabular(inst, 50_000, np.random.default_rng(1))
    counts = np.bincount(sample.x, minlength=inst.shape[0]) / 50_000

    assert np.allclose(counts, inst.p_x, atol=0.01)
    assert sample.r.shape == (50_000,)


def test_mips_and_ips_are_unbiased_under_assumptions():
    rng = np.random.default_rng(2)
    for _ in range(3):
        inst = random_instance(rng)
        terms = simulate_single_sample_terms(inst, 100_000, rng)
        value = exact_value(inst)
        for summands in (terms.ips, terms.mips):
            mean, stderr = terms.mean_and_stderr(summands)
            print("mean vs value:", mean, value, stderr)

            assert abs(mean - value) <= 3 * stderr


def test_logged_view_feeds_the_estimators():
    inst = toy_instance()
    sample = sample_tabular(inst, 1_000, np.random.default_rng(3))
    data = to_logged_dataset(inst, sample)
    target = TabularPolicy(inst.pi)
    likelihood = inst.p_e[0][:, sample.e].T
    weights = marginal_weights(target.action_dist(data.context), TabularPolicy(inst.pi0).action_dist(data.context), likelihood)

    assert np.allclose(ips(data, target).per_sample_terms, inst.vanilla_weights[sample.x, sample.a] * sample.r)
    assert np.allclose(mips(data, weights).per_sample_terms, inst.marginal_weights[sample.x, sample.e] * sample.r)


def test_identity_tolerances_are_distinct():
    assert IDENTITY_TOL == 1e-10
    assert PAIRWISE_TOL == 1e-12


def test_simulated_checks_pass_at_reduced_draws():
    checks = run_oracle_checks(seed=0, num_instances=5, simulation_draws=20_000, simulated_instances=2)
    simulated = [check for check in checks if check.name.endswith("_simulated")]
    for check in simulated:
        print(check)

    assert {check.name for check in simulated} == SIMULATED_CHECKS
    assert all(check.passed for check in simulated)


@pytest.mark.slow
def test_every_check_passes_at_default_settings():
    checks = run_oracle_checks()
    for check in checks:
        print(check)

    assert len(checks) == len(IDENTITY_CHECKS) + len(SIMULATED_CHECKS)
    assert all(check.passed for check in checks)


def test_ips_on_deficient_instance_misses_the_deficient_mass():
    rng = np.random.default_rng(4)
    for _ in range(3):
        inst = random_instance(rng, common_support=False, common_embedding_support=False)
        terms = simulate_single_sample_terms(inst, 100_000, rng)
        mean, stderr = terms.mean_and_stderr(terms.ips)
        expected = exact_value(inst) - exact_ips_deficiency_bias(inst)
        print("ips mean vs expected:", mean, expected, stderr)

        assert abs(mean - expected) <= 3 * stderr
