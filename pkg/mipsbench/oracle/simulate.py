"""
Sampling from tabular instances, for the simulation side of the oracles.
"""

from dataclasses import dataclass
from typing import Optional
import logging
import numbers

import numpy as np
from sklearn.utils import check_scalar

from ..core.dataset import LoggedDataset
from ..core.distributions import sample_categorical
from .instance import TabularInstance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TabularSample:
    """n draws (x, a, e, r) from a tabular instance."""

    x: np.ndarray
    a: np.ndarray
    e: np.ndarray
    r: np.ndarray


def sample_tabular(
    inst: TabularInstance,
    n: int,
    rng: np.random.Generator,
    policy: Optional[np.ndarray] = None,
) -> TabularSample:
    """
    Draw n records with actions from ``policy`` (the logging policy by default).

    Two-point rewards are q +- sqrt(E[r^2] - q^2) with equal probability;
    Gaussian rewards are N(q, E[r^2] - q^2). Both match the stored moments.
    """
    check_scalar(n, "n", numbers.Integral, min_val=1)
    policy = inst.pi0 if policy is None else np.asarray(policy, dtype=float)
    x = sample_categorical(np.broadcast_to(inst.p_x, (n, inst.p_x.size)), rng)
    a = sample_categorical(policy[x], rng)
    e = sample_categorical(inst.p_e[x, a], rng)
    mean = inst.q[x, a, e]
    spread = np.sqrt(inst.reward_variance[x, a, e])
    if inst.reward_family == "two_point":
        r = mean + spread * rng.choice([-1.0, 1.0], size=n)
    else:
        r = mean + spread * rng.standard_normal(n)
    return TabularSample(x=x, a=a, e=e, r=r)


def to_logged_dataset(inst: TabularInstance, sample: TabularSample) -> LoggedDataset:
    """
    View a logging-policy sample as a LoggedDataset.

    Contexts become one-hot rows, so ``TabularPolicy`` can read them back;
    the flat embedding becomes a single dimension of cardinality |E|.
    """
    X, A, E = inst.shape
    return LoggedDataset(
        context=np.eye(X)[sample.x],
        action=sample.a,
        embedding=sample.e[:, None],
        reward=sample.r,
        pscore=inst.pi0[sample.x, sample.a],
        embedding_cardinalities=(E,),
        num_actions=A,
    )


@dataclass(frozen=True, eq=False)
class TabularPolicy:
    """A tabular policy as a Policy over one-hot contexts."""

    table: np.ndarray

    @property
    def num_actions(self) -> int:
        return self.table.shape[1]

    def action_dist(self, context: np.ndarray) -> np.ndarray:
        return np.asarray(context, dtype=float) @ self.table


@dataclass(frozen=True)
class SimulatedTerms:
    """Single-sample summands of IPS and MIPS over independent draws."""

    ips: np.ndarray
    mips: np.ndarray

    @staticmethod
    def mean_and_stderr(terms: np.ndarray):
        return float(terms.mean()), float(terms.std(ddof=1) / np.sqrt(terms.size))


def simulate_single_sample_terms(
    inst: TabularInstance,
    draws: int,
    rng: np.random.Generator,
    marginal: Optional[np.ndarray] = None,
) -> SimulatedTerms:
    """
    IPS and MIPS summands w(x,a) r and w(x,e) r on ``draws`` logging samples.

    The mean of a sample mean equals the mean of its summand, so these
    terms estimate E_D[IPS] and E_D[MIPS] with the usual standard error.
    ``marginal`` replaces the true marginal weights.
    """
    sample = sample_tabular(inst, draws, rng)
    w_e = inst.marginal_weights if marginal is None else np.asarray(marginal, dtype=float)
    ips_terms = inst.vanilla_weights[sample.x, sample.a] * sample.r
    mips_terms = w_e[sample.x, sample.e] * sample.r
    logger.debug(f"Simulated {draws} single-sample terms")
    return SimulatedTerms(ips=ips_terms, mips=mips_terms)
