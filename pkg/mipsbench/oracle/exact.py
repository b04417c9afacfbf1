"""
Exact bias, variance and MSE quantities on tabular instances.

Each closed-form expression has a first-principles counterpart computed by
enumerating the single-sample distribution of the estimator's summand, so
the two can be checked against each other. A sample mean of n i.i.d.
summands Z has bias E[Z] - V and variance V[Z] / n.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.errors import AssumptionViolationError, EstimatorInputError
from .instance import TabularInstance, check_assumptions


def _require(inst: TabularInstance, *names: str):
    report = check_assumptions(inst)
    for name in names:
        if not getattr(report, name):
            raise AssumptionViolationError(name, f"the instance violates {name.replace('_', ' ')}")


def exact_value(inst: TabularInstance, policy: Optional[np.ndarray] = None) -> float:
    """V(policy) = sum_x p(x) sum_a policy(a|x) sum_e p(e|x,a) q(x,a,e); defaults to the target."""
    policy = inst.pi if policy is None else np.asarray(policy, dtype=float)
    return float(np.einsum("x,xa,xa->", inst.p_x, policy, inst.q_xa))


def exact_ips_deficiency_bias(inst: TabularInstance) -> float:
    """sum_x p(x) sum over a with pi0(a|x) = 0 of pi(a|x) q(x,a)."""
    deficient = inst.pi0 <= 0
    return float(np.einsum("x,xa,xa->", inst.p_x, np.where(deficient, inst.pi, 0.0), inst.q_xa))


@dataclass(frozen=True)
class SingleSampleMoments:
    """First two moments of one summand of an estimator."""

    mean: float
    second_moment: float

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean**2


def _check_marginal(inst: TabularInstance, marginal: Optional[np.ndarray]) -> np.ndarray:
    if marginal is None:
        return inst.marginal_weights
    marginal = np.asarray(marginal, dtype=float)
    X, _, E = inst.shape
    if marginal.shape != (X, E):
        raise EstimatorInputError(f"marginal weights must have shape {(X, E)}, got {marginal.shape}")
    return marginal


def exact_single_sample_moments(inst: TabularInstance, kind: str, marginal: Optional[np.ndarray] = None) -> SingleSampleMoments:
    """
    Moments of Z = w(x,a) r (``kind="ips"``) or Z = w(x,e) r (``kind="mips"``).

    ``marginal`` replaces the true (X, E) marginal weights, e.g. by
    estimated ones.
    """
    joint = inst.p_x[:, None, None] * inst.pi0[:, :, None] * inst.p_e
    if kind == "ips":
        weight = np.broadcast_to(inst.vanilla_weights[:, :, None], inst.shape)
    elif kind == "mips":
        weight = np.broadcast_to(_check_marginal(inst, marginal)[:, None, :], inst.shape)
    else:
        raise EstimatorInputError(f"unknown summand kind {kind!r}")
    mean = float(np.sum(joint * weight * inst.q))
    second = float(np.sum(joint * weight**2 * inst.second_moment))
    return SingleSampleMoments(mean=mean, second_moment=second)


def exact_mips_expectation(inst: TabularInstance, marginal: Optional[np.ndarray] = None) -> float:
    """E_D[MIPS], i.e. E[w(x,e) r] under the logging distribution."""
    return exact_single_sample_moments(inst, "mips", marginal).mean


def exact_single_sample_variances(inst: TabularInstance, marginal: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """(n V[IPS], n V[MIPS]) by direct enumeration."""
    return (
        exact_single_sample_moments(inst, "ips").variance,
        exact_single_sample_moments(inst, "mips", marginal).variance,
    )


def exact_mips_bias(inst: TabularInstance) -> float:
    """
    MIPS bias as the pairwise expression

        E_{p(x) p(e|x,pi0)}[ sum_{a<b} pi0(a|x,e) pi0(b|x,e)
                             (q(x,a,e) - q(x,b,e)) (w(x,b) - w(x,a)) ]

    with pi0(a|x,e) from Bayes' rule. Unsupported actions enter with w = 0;
    the expression equals E_D[MIPS] - V(pi) when common support holds.

    Raises:
        AssumptionViolationError: Without common embedding support; use
            ``exact_bias_deficient_embedding`` for that case.
    """
    _require(inst, "common_embedding_support")
    post = inst.logging_posterior
    w = inst.vanilla_weights
    q_gap = inst.q[:, :, None, :] - inst.q[:, None, :, :]
    w_gap = w[:, None, :] - w[:, :, None]
    # symmetric in (a, b) with a zero diagonal, so half the full sum is the a < b sum
    pairs = 0.5 * np.einsum("xae,xbe,xabe,xab->xe", post, post, q_gap, w_gap)
    return float(np.einsum("x,xe,xe->", inst.p_x, inst.logging_marginal, pairs))


@dataclass(frozen=True)
class VarianceReduction:
    """
    Variance reduction of MIPS over IPS.

    Attributes:
        value: E_{p(x)p(e|x,pi0)}[E[r^2|x,e] V_{pi0(a|x,e)}[w(x,a)]].
        ips_variance: n V[IPS] by enumeration.
        mips_variance: n V[MIPS] by enumeration.
    """

    value: float
    ips_variance: float
    mips_variance: float


def exact_variance_reduction(inst: TabularInstance, check: bool = True) -> VarianceReduction:
    """
    Closed-form variance reduction plus both variances for cross-checking.

    E[r^2|x,e] is the posterior average sum_a pi0(a|x,e) E[r^2|x,a,e], which
    is the plain conditional second moment under no direct effect.

    Raises:
        AssumptionViolationError: If ``check`` and any of the three
            assumptions fails.
    """
    if check:
        _require(inst, "common_support", "common_embedding_support", "no_direct_effect")
    post = inst.logging_posterior
    w = inst.vanilla_weights[:, :, None]
    mean_w = np.sum(post * w, axis=1)
    var_w = np.sum(post * w**2, axis=1) - mean_w**2
    second = np.sum(post * inst.second_moment, axis=1)
    value = float(np.einsum("x,xe,xe,xe->", inst.p_x, inst.logging_marginal, second, var_w))
    ips_var, mips_var = exact_single_sample_variances(inst)
    return VarianceReduction(value=value, ips_variance=ips_var, mips_variance=mips_var)


def exact_mse_gain(inst: TabularInstance, n: int) -> float:
    """
    n (MSE(IPS) - MSE(MIPS)) in closed form:

        E_{pi0}[(w(x,a)^2 - w(x,e)^2) E[r^2|x,a,e]] + 2 V(pi) Bias + (1 - n) Bias^2

    Raises:
        AssumptionViolationError: Without common support or common
            embedding support.
    """
    _require(inst, "common_support", "common_embedding_support")
    joint = inst.p_x[:, None, None] * inst.pi0[:, :, None] * inst.p_e
    w_a = inst.vanilla_weights[:, :, None]
    w_e = inst.marginal_weights[:, None, :]
    first = float(np.sum(joint * (w_a**2 - w_e**2) * inst.second_moment))
    bias = exact_mips_bias(inst)
    return first + 2.0 * exact_value(inst) * bias + (1 - n) * bias**2


def direct_mse_gain(inst: TabularInstance, n: int) -> float:
    """n (MSE(IPS) - MSE(MIPS)) from enumerated biases and variances."""
    value = exact_value(inst)
    ips = exact_single_sample_moments(inst, "ips")
    mips_ = exact_single_sample_moments(inst, "mips")
    mse_ips = ips.variance / n + (ips.mean - value) ** 2
    mse_mips = mips_.variance / n + (mips_.mean - value) ** 2
    return n * (mse_ips - mse_mips)


@dataclass(frozen=True)
class EstimatedWeightMoments:
    """Bias and single-sample variance (n V[MIPS]) of MIPS with estimated weights."""

    bias: float
    variance: float


def estimated_marginal_weights(inst: TabularInstance, delta: np.ndarray) -> np.ndarray:
    """(X, E) w_hat = (1 - delta) w(x,e)."""
    delta = np.asarray(delta, dtype=float)
    X, _, E = inst.shape
    if delta.shape != (X, E):
        raise EstimatorInputError(f"delta must have shape {(X, E)}, got {delta.shape}")
    return (1.0 - delta) * inst.marginal_weights


def exact_estimated_weight_bias_variance(inst: TabularInstance, delta: np.ndarray) -> EstimatedWeightMoments:
    """
    Bias and variance of MIPS with w_hat(x,e) = (1 - delta(x,e)) w(x,e).

    bias = Bias(MIPS) - E_{p(x)p(e|x,pi)}[delta(x,e) q(x,pi0,e)]
    variance = E_{p(x)p(e|x,pi)}[(1 - delta)^2 w(x,e) sigma^2(x,pi0,e)]
             + E_{p(x)}[V_{pi0(a|x)p(e|x,a)}[w_hat(x,e) q(x,a,e)]]
             + V_{p(x)}[E_{p(e|x,pi)}[(1 - delta) q(x,pi0,e)]]

    with q(x,pi0,e) and sigma^2(x,pi0,e) averaged under pi0(a|x,e).

    Raises:
        AssumptionViolationError: Without common embedding support.
    """
    w_hat = estimated_marginal_weights(inst, delta)
    delta = np.asarray(delta, dtype=float)
    post = inst.logging_posterior
    q_pi0 = np.sum(post * inst.q, axis=1)
    sigma_pi0 = np.sum(post * inst.reward_variance, axis=1)
    target = inst.target_marginal

    bias = exact_mips_bias(inst) - float(np.einsum("x,xe,xe,xe->", inst.p_x, target, delta, q_pi0))

    noise_term = float(np.einsum("x,xe,xe,xe,xe->", inst.p_x, target, (1.0 - delta) ** 2, inst.marginal_weights, sigma_pi0))
    joint = inst.pi0[:, :, None] * inst.p_e
    signal = w_hat[:, None, :] * inst.q
    inner_mean = np.sum(joint * signal, axis=(1, 2))
    inner_var = np.sum(joint * signal**2, axis=(1, 2)) - inner_mean**2
    within = float(inst.p_x @ inner_var)
    per_context = np.sum(target * (1.0 - delta) * q_pi0, axis=1)
    between = float(inst.p_x @ per_context**2 - (inst.p_x @ per_context) ** 2)
    return EstimatedWeightMoments(bias=bias, variance=noise_term + within + between)


def exact_bias_deficient_embedding(inst: TabularInstance) -> float:
    """
    Magnitude of the MIPS bias when some embeddings lack logging support:

        E_{p(x)}[ sum over e with p(e|x,pi0) = 0 of p(e|x,pi) q(x,e) ]

    The bias itself is the negative of this sum (MIPS underestimates by
    the value carried by unsupported embeddings); the magnitude is returned.

    Raises:
        AssumptionViolationError: Without no direct effect.
    """
    _require(inst, "no_direct_effect")
    unsupported = inst.logging_marginal <= 0
    # p(e|x,pi) q(x,e) = sum_a pi(a|x) p(e|x,a) q(x,a,e) under no direct effect
    carried = np.einsum("xa,xae,xae->xe", inst.pi, inst.p_e, inst.q)
    return abs(float(np.einsum("x,xe->", inst.p_x, np.where(unsupported, carried, 0.0))))


@dataclass(frozen=True)
class IdentitySides:
    lhs: float
    rhs: float


def pairwise_difference_identity(f: np.ndarray, g: np.ndarray, h: np.ndarray) -> IdentitySides:
    """
    Both sides of the centring identity

        sum_a f(a) g(a) (h(a) - sum_b g(b) h(b))
        = sum_{a<b} g(a) g(b) (h(a) - h(b)) (f(a) - f(b))

    for a distribution g.

    Raises:
        EstimatorInputError: On length mismatch, empty input or g off the simplex.
    """
    f, g, h = (np.asarray(v, dtype=float) for v in (f, g, h))
    if f.ndim != 1 or f.shape != g.shape or g.shape != h.shape or f.size < 1:
        raise EstimatorInputError("f, g and h must be non-empty vectors of equal length")
    if np.any(g < 0) or abs(g.sum() - 1.0) > 1e-9:
        raise EstimatorInputError("g must be a distribution")
    lhs = float(np.sum(f * g * (h - g @ h)))
    a, b = np.triu_indices(f.size, k=1)
    rhs = float(np.sum(g[a] * g[b] * (h[a] - h[b]) * (f[a] - f[b])))
    return IdentitySides(lhs=lhs, rhs=rhs)
