"""
Finite (X, A, E) problems that can be enumerated exactly.

Embeddings here live in one flat finite space E and may depend on the
context, p(e|x,a). Rewards are described by their first two conditional
moments q(x,a,e) and E[r^2|x,a,e]; the simulation family decides how a
reward with those moments is drawn.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Literal
import json

import numpy as np

from ..core.errors import InvalidEnvironmentError


RewardFamily = Literal["two_point", "gaussian"]
_TOL = 1e-9


def _readonly(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float)
    array.setflags(write=False)
    return array


def _check_simplex(array: np.ndarray, name: str):
    if np.any(array < 0) or np.any(np.abs(array.sum(axis=-1) - 1.0) > _TOL):
        raise InvalidEnvironmentError(f"{name} must hold distributions along its last axis")


@dataclass(frozen=True, eq=False)
class TabularInstance:
    """
    An enumerable bandit problem.

    Attributes:
        p_x: (X,) context distribution.
        pi: (X, A) target policy.
        pi0: (X, A) logging policy.
        p_e: (X, A, E) embedding distributions p(e|x,a).
        q: (X, A, E) expected rewards q(x,a,e).
        second_moment: (X, A, E) E[r^2 | x,a,e], at least q^2.
        reward_family: How rewards are simulated.

    Raises:
        InvalidEnvironmentError: If shapes disagree or a table is not a
            distribution.
    """

    p_x: np.ndarray
    pi: np.ndarray
    pi0: np.ndarray
    p_e: np.ndarray
    q: np.ndarray
    second_moment: np.ndarray
    reward_family: RewardFamily = "two_point"

    def __post_init__(self):
        for name in ("p_x", "pi", "pi0", "p_e", "q", "second_moment"):
            value = _readonly(getattr(self, name))
            if not np.all(np.isfinite(value)):
                raise InvalidEnvironmentError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        X, A, E = self.p_e.shape
        if self.p_x.shape != (X,) or self.pi.shape != (X, A) or self.pi0.shape != (X, A):
            raise InvalidEnvironmentError("p_x, pi and pi0 do not match p_e's (X, A, E) shape")
        if self.q.shape != (X, A, E) or self.second_moment.shape != (X, A, E):
            raise InvalidEnvironmentError("q and second_moment must have shape (X, A, E)")
        _check_simplex(self.p_x, "p_x")
        _check_simplex(self.pi, "pi")
        _check_simplex(self.pi0, "pi0")
        _check_simplex(self.p_e, "p_e")
        if np.any(self.second_moment < self.q**2 - 1e-12):
            raise InvalidEnvironmentError("second_moment must be at least q^2")
        if self.reward_family not in ("two_point", "gaussian"):
            raise InvalidEnvironmentError(f"unknown reward family {self.reward_family!r}")

    @property
    def shape(self):
        return self.p_e.shape

    @cached_property
    def q_xa(self) -> np.ndarray:
        """(X, A) q(x,a) = sum_e p(e|x,a) q(x,a,e)."""
        return np.einsum("xae,xae->xa", self.p_e, self.q)

    @cached_property
    def reward_variance(self) -> np.ndarray:
        """(X, A, E) sigma^2(x,a,e)."""
        return np.maximum(self.second_moment - self.q**2, 0.0)

    @cached_property
    def vanilla_weights(self) -> np.ndarray:
        """(X, A) pi/pi0, set to 0 where pi0 = 0."""
        return np.divide(self.pi, self.pi0, out=np.zeros_like(self.pi), where=self.pi0 > 0)

    def embedding_marginal(self, policy: np.ndarray) -> np.ndarray:
        """(X, E) p(e|x,policy)."""
        return np.einsum("xa,xae->xe", policy, self.p_e)

    @cached_property
    def logging_marginal(self) -> np.ndarray:
        return self.embedding_marginal(self.pi0)

    @cached_property
    def target_marginal(self) -> np.ndarray:
        return self.embedding_marginal(self.pi)

    @cached_property
    def marginal_weights(self) -> np.ndarray:
        """(X, E) p(e|x,pi)/p(e|x,pi0), set to 0 where the logging marginal is 0."""
        return np.divide(
            self.target_marginal,
            self.logging_marginal,
            out=np.zeros_like(self.target_marginal),
            where=self.logging_marginal > 0,
        )

    @cached_property
    def logging_posterior(self) -> np.ndarray:
        """(X, A, E) pi0(a|x,e) by Bayes' rule, 0 where p(e|x,pi0) = 0."""
        joint = self.pi0[:, :, None] * self.p_e
        marginal = self.logging_marginal[:, None, :]
        return np.divide(joint, marginal, out=np.zeros_like(joint), where=marginal > 0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_x": self.p_x.tolist(),
            "pi": self.pi.tolist(),
            "pi0": self.pi0.tolist(),
            "p_e": self.p_e.tolist(),
            "q": self.q.tolist(),
            "second_moment": self.second_moment.tolist(),
            "reward_family": self.reward_family,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TabularInstance":
        return cls(**data)

    def to_json(self) -> str:
        """JSON text; floats are written with repr precision so reading back is exact."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "TabularInstance":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class AssumptionReport:
    """
    Which structural assumptions an instance satisfies.

    Attributes:
        common_support: pi(a|x) > 0 implies pi0(a|x) > 0.
        common_embedding_support: p(e|x,pi) > 0 implies p(e|x,pi0) > 0.
        no_direct_effect: q and E[r^2] depend on (x, a, e) only through
            (x, e) wherever p(e|x,a) > 0.
    """

    common_support: bool
    common_embedding_support: bool
    no_direct_effect: bool


def check_assumptions(inst: TabularInstance) -> AssumptionReport:
    """Evaluate the three support / no-direct-effect assumptions on ``inst``."""
    live = inst.p_x[:, None] > 0
    common_support = not np.any(live & (inst.pi > 0) & (inst.pi0 <= 0))
    common_embedding_support = not np.any(live & (inst.target_marginal > 0) & (inst.logging_marginal <= 0))

    no_direct_effect = True
    support = inst.p_e > 0
    for table in (inst.q, inst.second_moment):
        high = np.where(support, table, -np.inf).max(axis=1)
        low = np.where(support, table, np.inf).min(axis=1)
        spread = np.where(np.isfinite(high) & np.isfinite(low), high - low, 0.0)
        if np.any(spread > 1e-12 * np.maximum(1.0, np.abs(np.where(np.isfinite(high), high, 0.0)))):
            no_direct_effect = False
    return AssumptionReport(common_support, common_embedding_support, no_direct_effect)


def _floored_simplex(rng: np.random.Generator, size: int, floor: float, thin: bool) -> np.ndarray:
    raw = rng.dirichlet(np.ones(size))
    if thin and size > 1:
        raw[rng.integers(size)] = 0.0
        raw = raw / raw.sum()
    return floor + (1.0 - size * floor) * raw


def random_instance(
    rng: np.random.Generator,
    num_contexts: int = 3,
    num_actions: int = 4,
    num_embeddings: int = 3,
    common_support: bool = True,
    common_embedding_support: bool = True,
    no_direct_effect: bool = True,
    context_dependent_embeddings: bool = True,
    propensity_floor: float = 1e-3,
    reward_family: RewardFamily = "two_point",
) -> TabularInstance:
    """
    Draw a random tabular instance with the requested assumption pattern.

    Logging propensities are floored at ``propensity_floor`` and, with
    probability 0.3 per context, one action sits exactly at the floor, so
    large weights occur without deficiency. Violating common support zeros
    one random logging action per context that the target still plays.
    Violating common embedding support additionally reserves one embedding
    for that deficient action only; this implies violating common support.

    Raises:
        ValueError: If the requested pattern is impossible (embedding
            support violated with common support kept, or fewer than 2
            actions / embeddings for a violation).
    """
    X, A, E = num_contexts, num_actions, num_embeddings
    if not common_embedding_support and common_support:
        raise ValueError("common embedding support can only fail when common support fails")
    if not common_support and A < 2:
        raise ValueError("violating common support needs at least 2 actions")
    if not common_embedding_support and E < 2:
        raise ValueError("violating common embedding support needs at least 2 embeddings")

    p_x = rng.dirichlet(np.ones(X))
    pi = rng.dirichlet(np.ones(A), size=X)
    pi0 = np.stack([_floored_simplex(rng, A, propensity_floor, rng.random() < 0.3) for _ in range(X)])
    if context_dependent_embeddings:
        p_e = rng.dirichlet(np.ones(E), size=(X, A))
    else:
        p_e = np.broadcast_to(rng.dirichlet(np.ones(E), size=A), (X, A, E)).copy()

    if not common_support:
        for x in range(X):
            deficient = rng.integers(A)
            pi0[x, deficient] = 0.0
            pi0[x] /= pi0[x].sum()
            pi[x, deficient] = max(pi[x, deficient], 0.1)
            pi[x] /= pi[x].sum()
            if not common_embedding_support:
                reserved = rng.integers(E)
                others = np.arange(A) != deficient
                p_e[x, others, reserved] = 0.0
                p_e[x, others] /= p_e[x, others].sum(axis=1, keepdims=True)
                p_e[x, deficient, reserved] = max(p_e[x, deficient, reserved], 0.2)
                p_e[x, deficient] /= p_e[x, deficient].sum()

    if no_direct_effect:
        q = np.broadcast_to(rng.uniform(-1.0, 2.0, size=(X, 1, E)), (X, A, E)).copy()
        noise = np.broadcast_to(rng.uniform(0.0, 1.0, size=(X, 1, E)), (X, A, E)).copy()
    else:
        q = rng.uniform(-1.0, 2.0, size=(X, A, E))
        noise = rng.uniform(0.0, 1.0, size=(X, A, E))

    return TabularInstance(
        p_x=p_x,
        pi=pi,
        pi0=pi0,
        p_e=p_e,
        q=q,
        second_moment=q**2 + noise,
        reward_family=reward_family,
    )


# q(x1, e) for the three-action example; the table only fixes policies and p(e|a).
TOY_EMBEDDING_REWARDS = (1.0, 0.5, 2.0)


def toy_instance() -> TabularInstance:
    """
    One context, three actions, three embeddings.

    pi0 = (0.0, 0.2, 0.8) and pi = (0.2, 0.8, 0.0), so action 0 is deficient
    while every embedding keeps logging support. Rewards depend on the
    embedding only (no direct effect) with q(x1, e) = TOY_EMBEDDING_REWARDS
    and unit reward variance.
    """
    p_e = np.array(
        [
            [0.25, 0.25, 0.5],
            [0.5, 0.25, 0.25],
            [0.25, 0.5, 0.25],
        ]
    )
    q = np.tile(np.array(TOY_EMBEDDING_REWARDS), (3, 1))
    return TabularInstance(
        p_x=np.array([1.0]),
        pi=np.array([[0.2, 0.8, 0.0]]),
        pi0=np.array([[0.0, 0.2, 0.8]]),
        p_e=p_e[None, :, :],
        q=q[None, :, :],
        second_moment=q[None, :, :] ** 2 + 1.0,
    )
