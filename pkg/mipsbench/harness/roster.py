"""
Estimator roster.

Each roster entry maps a name to a function of a ReplicationContext. The
context fits the shared learned components (reward models, the action
posterior) lazily, once per dataset, so an estimator only pays for what it
uses and estimators that share a component see the same fit.
"""

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from ..core.dataset import LoggedDataset
from ..core.policies import Policy
from ..core.weights import marginal_weights
from ..estimators import EstimateRecord, dm, dr, ips, mips
from ..models import (
    CrossFitPlan,
    CrossFittedRewardModel,
    EstimatedWeights,
    PosteriorHyper,
    RidgeHyper,
    fit_action_posterior,
    fit_mrdr_reward_model,
    fit_reward_model,
    make_cross_fit_plan,
    posterior_weights,
)
from ..slope import DEFAULT_DELTA, select_embedding_dims, tune_lambda
from ..synthgen import SyntheticEnvironment, embedding_likelihood
from ..synthgen.seeding import CROSS_FIT, stream_seed

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class ReplicationContext:
    """
    One dataset plus everything the roster needs to evaluate on it.

    Attributes:
        data: Logged data.
        target: Policy being evaluated.
        logging_policy: Policy that logged ``data``.
        env: Synthetic environment, needed only by ``mips-true`` and for
            the known p(e|a) used to marginalise reward predictions.
        seed: Master seed; with ``replication`` it keys the cross-fitting stream.
        replication: Replication index.
        delta: SLOPE++ confidence level.
        folds: Cross-fitting folds.
    """

    data: LoggedDataset
    target: Policy
    logging_policy: Policy
    env: Optional[SyntheticEnvironment] = None
    seed: int = 0
    replication: int = 0
    delta: float = DEFAULT_DELTA
    folds: int = 2

    @cached_property
    def model_seed(self) -> int:
        return stream_seed(self.seed, CROSS_FIT, self.replication)

    @cached_property
    def plan(self) -> CrossFitPlan:
        return make_cross_fit_plan(len(self.data), self.folds, self.model_seed)

    @cached_property
    def embed_probs(self) -> Optional[List[np.ndarray]]:
        return None if self.env is None else self.env.embed_probabilities()

    @cached_property
    def reward_model(self) -> CrossFittedRewardModel:
        return fit_reward_model(self.data, self.plan, RidgeHyper(seed=self.model_seed), self.embed_probs)

    @cached_property
    def mrdr_model(self) -> CrossFittedRewardModel:
        return fit_mrdr_reward_model(self.data, self.target, self.plan, RidgeHyper(seed=self.model_seed), self.embed_probs)

    @cached_property
    def estimated_weights(self) -> EstimatedWeights:
        posterior = fit_action_posterior(self.data, hyper=PosteriorHyper(seed=self.model_seed))
        return posterior_weights(self.data, self.target, self.logging_policy, posterior)

    @cached_property
    def true_weights(self) -> np.ndarray:
        if self.env is None:
            raise ValueError("true marginal weights need the synthetic environment")
        likelihood = embedding_likelihood(self.env, self.data.embedding, self.data.observed_dims)
        return marginal_weights(
            self.target.action_dist(self.data.context),
            self.logging_policy.action_dist(self.data.context),
            likelihood,
        )


def _estimated_mips(ctx: ReplicationContext) -> EstimateRecord:
    estimated = ctx.estimated_weights
    record = mips(ctx.data, estimated.weights)
    return replace(record, metadata={**record.metadata, "skipped_mass": estimated.total_skipped})


def _shrunk(kind) -> Callable[[ReplicationContext], EstimateRecord]:
    def estimate(ctx: ReplicationContext) -> EstimateRecord:
        selection = tune_lambda(ctx.data, ctx.target, ctx.reward_model, kind, delta=ctx.delta)
        return selection.record

    return estimate


ESTIMATORS: Dict[str, Callable[[ReplicationContext], EstimateRecord]] = {
    "dm": lambda ctx: dm(ctx.data, ctx.target, ctx.reward_model),
    "ips": lambda ctx: ips(ctx.data, ctx.target),
    "dr": lambda ctx: dr(ctx.data, ctx.target, ctx.reward_model),
    "mrdr": lambda ctx: dr(ctx.data, ctx.target, ctx.mrdr_model),
    "switch-dr": _shrunk("switch"),
    "dros": _shrunk("os"),
    "dr-lambda": _shrunk("lambda"),
    "mips": _estimated_mips,
    "mips-true": lambda ctx: mips(ctx.data, ctx.true_weights, name="mips-true"),
    "mips-slope": lambda ctx: select_embedding_dims(
        ctx.data, ctx.target, ctx.logging_policy, ctx.delta, PosteriorHyper(seed=ctx.model_seed)
    ).record,
}

ESTIMATOR_NAMES = tuple(ESTIMATORS)


def check_roster(names: Sequence[str]) -> Tuple[str, ...]:
    """Validate roster names, keeping their order and dropping repeats."""
    roster = tuple(dict.fromkeys(names))
    if not roster:
        raise ValueError("the estimator roster is empty")
    unknown = [name for name in roster if name not in ESTIMATORS]
    if unknown:
        raise ValueError(f"unknown estimators {', '.join(unknown)}; available: {', '.join(ESTIMATOR_NAMES)}")
    return roster


def evaluate_roster(ctx: ReplicationContext, roster: Sequence[str]) -> Tuple[Dict[str, EstimateRecord], Dict[str, str]]:
    """
    Run every estimator of ``roster`` on one context.

    A failing estimator is logged and reported in the second mapping as
    ``"<ExceptionType>: <message>"``; the others still run. A non-finite
    estimate counts as a failure.
    """
    records: Dict[str, EstimateRecord] = {}
    failures: Dict[str, str] = {}
    for name in roster:
        try:
            record = ESTIMATORS[name](ctx)
            if not np.isfinite(record.estimate):
                raise FloatingPointError(f"non-finite estimate {record.estimate}")
            records[name] = record
        except Exception as exc:
            logger.error(f"Estimator {name} failed on replication {ctx.replication}: {exc}", exc_info=True)
            failures[name] = f"{type(exc).__name__}: {exc}"
    return records, failures
