"""
Property suite over random tabular instances.

Every check compares a closed-form quantity with its enumerated or
simulated counterpart and reports the worst discrepancy seen.
"""

from dataclasses import dataclass
from typing import Callable, List
import logging

import numpy as np

from ..core.distributions import Distribution
from ..core.weights import marginal_weight_true, vanilla_weight
from .exact import (
    direct_mse_gain,
    estimated_marginal_weights,
    exact_bias_deficient_embedding,
    exact_estimated_weight_bias_variance,
    exact_ips_deficiency_bias,
    exact_mips_bias,
    exact_mips_expectation,
    exact_mse_gain,
    exact_single_sample_moments,
    exact_value,
    exact_variance_reduction,
    pairwise_difference_identity,
)
from .instance import TabularInstance, check_assumptions, random_instance, toy_instance
from .simulate import simulate_single_sample_terms

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-10
PAIRWISE_TOL = 1e-12
SIMULATION_SE = 3.0


@dataclass(frozen=True)
class OracleCheck:
    """Outcome of one property check."""

    name: str
    passed: bool
    detail: str


def _scaled_gap(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _identity_check(name: str, instances: List[TabularInstance], closed: Callable, direct: Callable) -> OracleCheck:
    worst = max(_scaled_gap(closed(inst), direct(inst)) for inst in instances)
    return OracleCheck(name, worst <= IDENTITY_TOL, f"max scaled gap {worst:.2e} over {len(instances)} instances")


def _pairwise_identity_check(rng: np.random.Generator, trials: int = 1000) -> OracleCheck:
    worst = 0.0
    for _ in range(trials):
        m = int(rng.integers(1, 13))
        sides = pairwise_difference_identity(rng.normal(size=m), rng.dirichlet(np.ones(m)), rng.normal(size=m))
        worst = max(worst, abs(sides.lhs - sides.rhs))
    return OracleCheck("pairwise_difference_identity", worst <= PAIRWISE_TOL, f"max |lhs - rhs| {worst:.2e} over {trials} triples")


def _toy_check() -> OracleCheck:
    inst = toy_instance()
    pi = Distribution(inst.pi[0])
    pi0 = Distribution(inst.pi0[0])
    embed_model = [Distribution(row) for row in inst.p_e[0]]
    w_a = vanilla_weight(pi, pi0, 1)
    w_e = [marginal_weight_true(pi, pi0, embed_model, e) for e in range(3)]
    report = check_assumptions(inst)
    passed = (
        abs(w_a - 4.0) <= 1e-12
        and np.allclose(w_e, [1.5, 0.25 / 0.45, 1.2], rtol=0, atol=1e-12)
        and not report.common_support
        and report.common_embedding_support
    )
    return OracleCheck("toy_example_weights", passed, f"w(a2)={w_a:.4g}, w(e)={np.round(w_e, 4).tolist()}")


def _simulation_check(
    name: str,
    rng: np.random.Generator,
    instances,
    expected: Callable,
    draws: int,
    marginal=None,
    kind: str = "mips",
) -> OracleCheck:
    if kind not in ("ips", "mips"):
        raise ValueError(f"kind must be 'ips' or 'mips', got {kind!r}")
    worst = 0.0
    for inst in instances:
        terms = simulate_single_sample_terms(inst, draws, rng, marginal(inst) if marginal else None)
        mean, stderr = terms.mean_and_stderr(getattr(terms, kind))
        gap = abs(mean - exact_value(inst) - expected(inst))
        worst = max(worst, gap / stderr if stderr > 0 else (0.0 if gap <= IDENTITY_TOL else np.inf))
    return OracleCheck(name, worst <= SIMULATION_SE, f"max deviation {worst:.2f} SE over {len(instances)} instances")


def run_oracle_checks(seed: int = 0, num_instances: int = 50, simulation_draws: int = 100_000, simulated_instances: int = 5) -> List[OracleCheck]:
    """
    Run the property suite.

    Identity checks use ``num_instances`` random instances each and pass
    when closed form and enumeration agree to 1e-10 (relative to the
    magnitude of the quantities when that exceeds 1); the pairwise
    difference identity and the sign of the variance reduction are held
    to 1e-12. Simulation checks use ``simulated_instances`` instances with
    ``simulation_draws`` draws and pass within 3 standard errors.
    """
    rng = np.random.default_rng(seed)
    supported = [random_instance(rng, no_direct_effect=False) for _ in range(num_instances)]
    causal = [random_instance(rng) for _ in range(num_instances)]
    deficient_embeddings = [
        random_instance(rng, common_support=False, common_embedding_support=False) for _ in range(num_instances)
    ]
    deltas = [rng.uniform(-0.5, 0.5, size=(inst.shape[0], inst.shape[2])) for inst in supported]

    checks = [
        _pairwise_identity_check(rng),
        _toy_check(),
        _identity_check(
            "mips_bias_closed_form",
            supported,
            exact_mips_bias,
            lambda inst: exact_mips_expectation(inst) - exact_value(inst),
        ),
        _identity_check(
            "variance_reduction_closed_form",
            causal,
            lambda inst: exact_variance_reduction(inst).value,
            lambda inst: exact_variance_reduction(inst).ips_variance - exact_variance_reduction(inst).mips_variance,
        ),
        OracleCheck(
            "variance_reduction_non_negative",
            all(exact_variance_reduction(inst, check=False).value >= -PAIRWISE_TOL for inst in supported + causal),
            f"{2 * num_instances} instances",
        ),
        _identity_check("mse_gain_closed_form", supported, lambda inst: exact_mse_gain(inst, 10), lambda inst: direct_mse_gain(inst, 10)),
        _identity_check(
            "estimated_weight_bias",
            list(range(num_instances)),
            lambda i: exact_estimated_weight_bias_variance(supported[i], deltas[i]).bias,
            lambda i: exact_mips_expectation(supported[i], estimated_marginal_weights(supported[i], deltas[i]))
            - exact_value(supported[i]),
        ),
        _identity_check(
            "estimated_weight_variance",
            list(range(num_instances)),
            lambda i: exact_estimated_weight_bias_variance(supported[i], deltas[i]).variance,
            lambda i: exact_single_sample_moments(
                supported[i], "mips", estimated_marginal_weights(supported[i], deltas[i])
            ).variance,
        ),
        _identity_check(
            "deficient_embedding_bias",
            deficient_embeddings,
            exact_bias_deficient_embedding,
            lambda inst: abs(exact_mips_expectation(inst) - exact_value(inst)),
        ),
        _identity_check(
            "ips_deficiency_bias",
            deficient_embeddings,
            exact_ips_deficiency_bias,
            lambda inst: exact_value(inst) - exact_single_sample_moments(inst, "ips").mean,
        ),
    ]

    sim_rng = np.random.default_rng([seed, 1])
    picked = list(range(min(simulated_instances, num_instances)))
    checks += [
        _simulation_check(
            "mips_bias_simulated",
            sim_rng,
            [supported[i] for i in picked],
            exact_mips_bias,
            simulation_draws,
        ),
        _simulation_check(
            "estimated_weight_bias_simulated",
            sim_rng,
            [supported[i] for i in picked],
            lambda inst: exact_estimated_weight_bias_variance(inst, deltas[supported.index(inst)]).bias,
            simulation_draws,
            marginal=lambda inst: estimated_marginal_weights(inst, deltas[supported.index(inst)]),
        ),
        _simulation_check(
            "deficient_embedding_bias_simulated",
            sim_rng,
            [deficient_embeddings[i] for i in picked],
            lambda inst: exact_mips_expectation(inst) - exact_value(inst),
            simulation_draws,
        ),
        _simulation_check(
            "ips_deficiency_bias_simulated",
            sim_rng,
            [deficient_embeddings[i] for i in picked],
            lambda inst: -exact_ips_deficiency_bias(inst),
            simulation_draws,
            kind="ips",
        ),
    ]
    for check in checks:
        logger.info(f"{check.name}: {'ok' if check.passed else 'FAILED'} ({check.detail})")
    return checks
