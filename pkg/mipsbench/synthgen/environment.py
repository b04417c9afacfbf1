"""
Synthetic environment with categorical action embeddings.

The environment draws, once and deterministically from the config seed:

- alpha[a, k, v]: embedding logits, p(e_k = v | a) = softmax_v(alpha[a, k, :]);
- M, theta_x, theta_e: reward parameters, uniform on [-1, 1];
- latent[k, v]: the unobserved vector x_{e_k} of embedding value v in dim k;
- eta: Dirichlet(1, ..., 1) importance of each embedding dimension;
- deficient_set: actions the logging policy never plays.

Expected rewards are

    q(x, e) = sum_k eta_k * (x' M x_{e_k} + theta_x' x + theta_e' x_{e_k})
    q(x, a) = E_{p(e|a)}[q(x, e)]

Because q(x, e) is additive over dimensions and p(e|a) factorises,
q(x, a) has the closed form x' M u_a + theta_x' x + theta_e' u_a with
u_a = sum_k eta_k sum_v p(e_k = v | a) x_{k,v}. Nothing here enumerates the
full embedding product space.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Sequence
import logging

import numpy as np
from scipy.special import log_softmax, softmax

from ..core.distributions import Distribution, epsilon_greedy_rows, softmax_rows
from ..core.errors import InvalidEnvironmentError
from .config import SyntheticConfig
from .seeding import ENVIRONMENT, stream_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SyntheticEnvironment:
    """
    Frozen parameters of a synthetic environment.

    Attributes:
        alpha: (|A|, d_e, |E_k|) embedding logits.
        M: (d_x, d_x) reward interaction matrix.
        theta_x: (d_x,) context coefficients.
        theta_e: (d_x,) latent-embedding coefficients.
        eta: (d_e,) dimension importances on the simplex.
        latent_vectors: (d_e, |E_k|, d_x) unobserved embedding vectors.
        deficient_set: Sorted action ids with zero logging probability.

    Raises:
        InvalidEnvironmentError: If tensors are non-finite or inconsistent.
    """

    alpha: np.ndarray
    M: np.ndarray
    theta_x: np.ndarray
    theta_e: np.ndarray
    eta: np.ndarray
    latent_vectors: np.ndarray
    deficient_set: np.ndarray

    def __post_init__(self):
        for name in ("alpha", "M", "theta_x", "theta_e", "eta", "latent_vectors"):
            value = np.array(getattr(self, name), dtype=float)
            if not np.all(np.isfinite(value)):
                raise InvalidEnvironmentError(f"environment tensor {name} is not finite")
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        deficient = np.unique(np.asarray(self.deficient_set, dtype=np.int64))
        deficient.setflags(write=False)
        object.__setattr__(self, "deficient_set", deficient)

        num_actions, embed_dims, cardinality = self.alpha.shape
        context_dim = self.M.shape[0]
        if self.M.shape != (context_dim, context_dim):
            raise InvalidEnvironmentError("M must be square")
        if self.theta_x.shape != (context_dim,) or self.theta_e.shape != (context_dim,):
            raise InvalidEnvironmentError("theta vectors must have length d_x")
        if self.latent_vectors.shape != (embed_dims, cardinality, context_dim):
            raise InvalidEnvironmentError(
                f"latent_vectors has shape {self.latent_vectors.shape}, expected {(embed_dims, cardinality, context_dim)}"
            )
        if self.eta.shape != (embed_dims,) or np.any(self.eta < 0) or abs(self.eta.sum() - 1.0) > 1e-9:
            raise InvalidEnvironmentError("eta must be a distribution over embedding dimensions")
        if deficient.size and (deficient[0] < 0 or deficient[-1] >= num_actions):
            raise InvalidEnvironmentError("deficient actions out of range")
        if deficient.size >= num_actions:
            raise InvalidEnvironmentError("every action is deficient; the logging policy has no support")

    @property
    def num_actions(self) -> int:
        return self.alpha.shape[0]

    @property
    def embed_dims(self) -> int:
        return self.alpha.shape[1]

    @property
    def embed_cardinality(self) -> int:
        return self.alpha.shape[2]

    @property
    def context_dim(self) -> int:
        return self.M.shape[0]

    @cached_property
    def embed_probs(self) -> np.ndarray:
        """(|A|, d_e, |E_k|) per-dimension embedding distributions p(e_k | a)."""
        return softmax(self.alpha, axis=2)

    @cached_property
    def embed_log_probs(self) -> np.ndarray:
        return log_softmax(self.alpha, axis=2)

    @cached_property
    def action_latent_mean(self) -> np.ndarray:
        """(|A|, d_x) u_a = sum_k eta_k sum_v p(e_k = v | a) x_{k,v}."""
        return np.einsum("k,akv,kvd->ad", self.eta, self.embed_probs, self.latent_vectors)

    @cached_property
    def supported_actions(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.num_actions), self.deficient_set)

    def embed_probabilities(self) -> List[np.ndarray]:
        """Per-dimension (|A|, |E_k|) matrices, the format the reward models consume."""
        return [self.embed_probs[:, k, :] for k in range(self.embed_dims)]


def build_environment(config: SyntheticConfig) -> SyntheticEnvironment:
    """
    Draw a synthetic environment from the config's environment seed stream.

    Identical configs reproduce bit-identical environments; the sample size
    and replication count do not enter the environment stream.
    """
    rng = stream_rng(config.seed, ENVIRONMENT)
    A, d_e, C, d_x = config.num_actions, config.embed_dims, config.embed_cardinality, config.context_dim
    alpha = rng.standard_normal((A, d_e, C))
    M = rng.uniform(-1.0, 1.0, size=(d_x, d_x))
    theta_x = rng.uniform(-1.0, 1.0, size=d_x)
    theta_e = rng.uniform(-1.0, 1.0, size=d_x)
    eta = rng.dirichlet(np.ones(d_e))
    latent = rng.standard_normal((d_e, C, d_x))
    deficient = np.sort(rng.choice(A, size=config.num_deficient_actions, replace=False))
    logger.info(f"Built environment: |A|={A}, d_e={d_e}, |E_k|={C}, d_x={d_x}, |U_0|={deficient.size}")
    return SyntheticEnvironment(
        alpha=alpha,
        M=M,
        theta_x=theta_x,
        theta_e=theta_e,
        eta=eta,
        latent_vectors=latent,
        deficient_set=deficient,
    )


def embed_distribution(env: SyntheticEnvironment, action: int) -> List[Distribution]:
    """Per-dimension distributions p(e_k | a) for one action."""
    if not 0 <= action < env.num_actions:
        raise InvalidEnvironmentError(f"action {action} out of range [0, {env.num_actions})")
    return [Distribution(env.embed_probs[action, k]) for k in range(env.embed_dims)]


def q_xe_batch(env: SyntheticEnvironment, context: np.ndarray, embedding: np.ndarray) -> np.ndarray:
    """
    Expected reward q(x_i, e_i) for paired rows.

    Args:
        context: (n, d_x).
        embedding: (n, d_e) integer array over all embedding dimensions.
    """
    context = np.atleast_2d(np.asarray(context, dtype=float))
    embedding = np.atleast_2d(np.asarray(embedding, dtype=np.int64))
    # z_i = sum_k eta_k x_{k, e_ik}
    gathered = env.latent_vectors[np.arange(env.embed_dims)[None, :], embedding]
    z = np.einsum("k,nkd->nd", env.eta, gathered)
    return np.einsum("nd,de,ne->n", context, env.M, z) + context @ env.theta_x + z @ env.theta_e


def q_xe(env: SyntheticEnvironment, context: np.ndarray, embedding: Sequence[int]) -> float:
    """Expected reward q(x, e) of one context and one embedding."""
    embedding = np.asarray(embedding, dtype=np.int64)
    if embedding.shape != (env.embed_dims,) or np.any(embedding < 0) or np.any(embedding >= env.embed_cardinality):
        raise InvalidEnvironmentError(f"embedding {embedding.tolist()} does not fit the environment's cardinalities")
    return float(q_xe_batch(env, np.asarray(context)[None, :], embedding[None, :])[0])


def q_xa_batch(env: SyntheticEnvironment, context: np.ndarray) -> np.ndarray:
    """(n, |A|) expected rewards q(x_i, a) in closed form."""
    context = np.atleast_2d(np.asarray(context, dtype=float))
    u = env.action_latent_mean
    return context @ env.M @ u.T + (context @ env.theta_x)[:, None] + (u @ env.theta_e)[None, :]


def q_xa(env: SyntheticEnvironment, context: np.ndarray, action: int) -> float:
    """Expected reward q(x, a) of one context and one action."""
    if not 0 <= action < env.num_actions:
        raise InvalidEnvironmentError(f"action {action} out of range [0, {env.num_actions})")
    return float(q_xa_batch(env, np.asarray(context)[None, :])[0, action])


def logging_dist(env: SyntheticEnvironment, config: SyntheticConfig, context: np.ndarray) -> np.ndarray:
    """
    (n, |A|) softmax logging probabilities with deficient actions zeroed.

    The softmax is taken over the supported actions only, which equals
    zeroing the deficient columns and renormalising.
    """
    q = q_xa_batch(env, context)
    probs = np.zeros_like(q)
    supported = env.supported_actions
    probs[:, supported] = softmax_rows(q[:, supported], config.beta)
    return probs


def target_dist(env: SyntheticEnvironment, config: SyntheticConfig, context: np.ndarray) -> np.ndarray:
    """(n, |A|) epsilon-greedy target probabilities; deficient actions stay in play."""
    return epsilon_greedy_rows(q_xa_batch(env, context), config.epsilon)


def logging_policy(env: SyntheticEnvironment, config: SyntheticConfig, context: np.ndarray) -> Distribution:
    """Logging policy pi_0(.|x) at one context."""
    return Distribution(logging_dist(env, config, np.asarray(context)[None, :])[0])


def target_policy(env: SyntheticEnvironment, config: SyntheticConfig, context: np.ndarray) -> Distribution:
    """Target policy pi(.|x) at one context."""
    return Distribution(target_dist(env, config, np.asarray(context)[None, :])[0])


@dataclass(frozen=True, eq=False)
class LoggingPolicy:
    """The softmax logging policy as a Policy."""

    env: SyntheticEnvironment
    config: SyntheticConfig

    @property
    def num_actions(self) -> int:
        return self.env.num_actions

    def action_dist(self, context: np.ndarray) -> np.ndarray:
        return logging_dist(self.env, self.config, context)


@dataclass(frozen=True, eq=False)
class TargetPolicy:
    """The epsilon-greedy target policy as a Policy."""

    env: SyntheticEnvironment
    config: SyntheticConfig

    @property
    def num_actions(self) -> int:
        return self.env.num_actions

    def action_dist(self, context: np.ndarray) -> np.ndarray:
        return target_dist(self.env, self.config, context)


def embedding_likelihood(env: SyntheticEnvironment, embedding: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """
    (n, |A|) likelihoods prod_{k in dims} p(e_ik | a) of the logged embeddings.

    Only the listed dimensions enter the product, which gives the embedding
    model an estimator sees when some dimensions are withheld.
    """
    embedding = np.atleast_2d(np.asarray(embedding, dtype=np.int64))
    log_lik = np.zeros((embedding.shape[0], env.num_actions))
    for k in dims:
        log_lik += env.embed_log_probs[:, k, :][:, embedding[:, k]].T
    return np.exp(log_lik)
