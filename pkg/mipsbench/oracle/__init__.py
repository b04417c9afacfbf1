"""
Exact oracles on enumerable tabular instances.
"""

from .checks import OracleCheck, run_oracle_checks
from .exact import (
    EstimatedWeightMoments,
    IdentitySides,
    SingleSampleMoments,
    VarianceReduction,
    direct_mse_gain,
    estimated_marginal_weights,
    exact_bias_deficient_embedding,
    exact_estimated_weight_bias_variance,
    exact_ips_deficiency_bias,
    exact_mips_bias,
    exact_mips_expectation,
    exact_mse_gain,
    exact_single_sample_moments,
    exact_single_sample_variances,
    exact_value,
    exact_variance_reduction,
    pairwise_difference_identity,
)
from .instance import AssumptionReport, TabularInstance, check_assumptions, random_instance, toy_instance
from .simulate import (
    SimulatedTerms,
    TabularPolicy,
    TabularSample,
    sample_tabular,
    simulate_single_sample_terms,
    to_logged_dataset,
)

__all__ = [
    "AssumptionReport",
    "EstimatedWeightMoments",
    "IdentitySides",
    "OracleCheck",
    "SimulatedTerms",
    "SingleSampleMoments",
    "TabularInstance",
    "TabularPolicy",
    "TabularSample",
    "VarianceReduction",
    "check_assumptions",
    "direct_mse_gain",
    "estimated_marginal_weights",
    "exact_bias_deficient_embedding",
    "exact_estimated_weight_bias_variance",
    "exact_ips_deficiency_bias",
    "exact_mips_bias",
    "exact_mips_expectation",
    "exact_mse_gain",
    "exact_single_sample_moments",
    "exact_single_sample_variances",
    "exact_value",
    "exact_variance_reduction",
    "pairwise_difference_identity",
    "random_instance",
    "run_oracle_checks",
    "sample_tabular",
    "simulate_single_sample_terms",
    "to_logged_dataset",
]
