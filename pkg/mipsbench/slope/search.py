"""
Embedding-dimension selection for MIPS and lambda tuning for shrunk DR.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Literal, Optional, Sequence, Tuple
import logging

import numpy as np

from ..core.dataset import LoggedDataset
from ..core.errors import EstimatorInputError
from ..core.policies import Policy
from ..estimators.base import EstimateRecord, RewardModel
from ..estimators.baselines import ShrinkKind, logged_weights, shrunk_dr
from ..estimators.mips import mips
from ..models.posterior import PosteriorHyper, fit_action_posterior, posterior_weights
from .selection import DEFAULT_DELTA, CandidateEstimate, cnf, slope_select

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_DIMS = 10


@dataclass(frozen=True)
class EmbeddingSelection:
    """Chosen dimension subset, its MIPS record and every candidate considered."""

    dims: Tuple[int, ...]
    record: EstimateRecord
    candidates: Tuple[CandidateEstimate, ...]


@dataclass(frozen=True)
class LambdaSelection:
    """Chosen lambda, its shrunk-DR record and every candidate considered."""

    lam: float
    record: EstimateRecord
    candidates: Tuple[CandidateEstimate, ...]


class _MipsCache:
    """MIPS records with estimated weights, one posterior fit per dim subset."""

    def __init__(self, data: LoggedDataset, target: Policy, logging_policy: Policy, hyper: Optional[PosteriorHyper]):
        self.data = data
        self.target = target
        self.logging_policy = logging_policy
        self.hyper = hyper
        self._records: Dict[Tuple[int, ...], EstimateRecord] = {}

    def __call__(self, dims: Sequence[int]) -> EstimateRecord:
        key = tuple(sorted(dims))
        if key not in self._records:
            posterior = fit_action_posterior(self.data, key, self.hyper)
            estimated = posterior_weights(self.data, self.target, self.logging_policy, posterior)
            record = mips(self.data, estimated.weights)
            self._records[key] = EstimateRecord.from_terms(
                "mips", record.per_sample_terms, dims=list(key), skipped_mass=estimated.total_skipped
            )
        return self._records[key]


def _greedy_subsets(data: LoggedDataset, evaluate: _MipsCache, delta: float) -> List[Tuple[int, ...]]:
    # coarsest first: rank single dims by the cnf of their own MIPS terms
    ranked = sorted(data.observed_dims, key=lambda k: (cnf(evaluate([k]).per_sample_terms, delta), k))
    return [tuple(sorted(ranked[: j + 1])) for j in range(len(ranked))]


def _all_subsets(data: LoggedDataset) -> List[Tuple[int, ...]]:
    observed = data.observed_dims
    if len(observed) > MAX_EXHAUSTIVE_DIMS:
        raise ValueError(f"exhaustive search supports at most {MAX_EXHAUSTIVE_DIMS} dims, got {len(observed)}")
    return [subset for size in range(1, len(observed) + 1) for subset in combinations(observed, size)]


def select_embedding_dims(
    data: LoggedDataset,
    target: Policy,
    logging_policy: Policy,
    delta: float = DEFAULT_DELTA,
    posterior_hyper: Optional[PosteriorHyper] = None,
    mode: Literal["greedy", "exhaustive"] = "greedy",
) -> EmbeddingSelection:
    """
    Choose which observed embedding dimensions MIPS should use.

    Greedy mode ranks single dimensions by the cnf of their MIPS terms and
    builds nested subsets by adding dimensions in that order, ending with
    the full observed set. Exhaustive mode tries every non-empty subset
    (at most 10 dimensions). Each subset gets a MIPS estimate with weights
    from its own fitted action posterior, and SLOPE++ picks among them.

    Raises:
        EstimatorInputError: If no embedding dimension is observed.
        ValueError: Exhaustive mode with more than 10 dimensions.
    """
    if not data.observed_dims:
        raise EstimatorInputError("embedding selection needs at least one observed dimension")
    evaluate = _MipsCache(data, target, logging_policy, posterior_hyper)
    subsets = _greedy_subsets(data, evaluate, delta) if mode == "greedy" else _all_subsets(data)
    candidates = tuple(CandidateEstimate.from_record(dims, evaluate(dims), delta) for dims in subsets)
    chosen = candidates[slope_select(candidates)]
    logger.info(f"Selected embedding dims {chosen.label} out of {len(candidates)} {mode} candidates")
    record = chosen.record.renamed("mips-slope")
    return EmbeddingSelection(dims=chosen.label, record=record, candidates=candidates)


def default_lambda_grid(kind: ShrinkKind, weights: np.ndarray) -> List[float]:
    """
    Candidate lambdas per shrinkage kind.

    - ``switch``: the 10%, 20%, ..., 100% quantiles of the observed weights, then inf.
    - ``os``: 1e-2, 1e-1, ..., 1e4.
    - ``lambda``: 0, 0.1, ..., 1.
    """
    if kind == "switch":
        quantiles = np.quantile(np.asarray(weights, dtype=float), np.linspace(0.1, 1.0, 10))
        return [float(q) for q in quantiles] + [float("inf")]
    if kind == "os":
        return [float(v) for v in np.logspace(-2, 4, 7)]
    if kind == "lambda":
        return [round(float(v), 10) for v in np.linspace(0.0, 1.0, 11)]
    raise EstimatorInputError(f"unknown shrinkage kind {kind!r}")


def tune_lambda(
    data: LoggedDataset,
    target: Policy,
    model: RewardModel,
    kind: ShrinkKind,
    grid: Optional[Sequence[float]] = None,
    delta: float = DEFAULT_DELTA,
) -> LambdaSelection:
    """
    Pick the shrinkage level of a shrunk DR estimator with SLOPE++.

    Raises:
        EstimatorInputError: If the grid is empty.
    """
    if grid is None:
        grid = default_lambda_grid(kind, logged_weights(data, target))
    grid = list(grid)
    if not grid:
        raise EstimatorInputError("lambda grid is empty")
    candidates = tuple(
        CandidateEstimate.from_record(float(lam), shrunk_dr(data, target, model, kind, lam), delta) for lam in grid
    )
    chosen = candidates[slope_select(candidates)]
    logger.info(f"Selected lambda={chosen.label!r} for {kind} from {len(grid)} candidates")
    return LambdaSelection(lam=chosen.label, record=chosen.record, candidates=candidates)
