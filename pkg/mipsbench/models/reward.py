"""
Cross-fitted ridge reward regressors.

Each fold's records are scored by a ridge regression trained on the other
folds, with features context ⊕ one-hot(e_k) and an unpenalised intercept.
Since the model is additive over embedding dimensions,

    q_hat(x, a) = E_{p(e|a)}[q_hat(x, e)]
                = x' beta_x + b + sum_k p(e_k | a)' beta_k

exactly, with p(e_k | a) taken from the environment when it is known and
from the training fold's per-action frequencies otherwise.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple
import logging
import numbers

import numpy as np
from sklearn.linear_model import Ridge
from sklearn.model_selection import KFold
from sklearn.utils import check_scalar

from ..core.dataset import LoggedDataset
from ..core.errors import EstimatorInputError
from ..core.policies import Policy
from ..estimators.baselines import logged_weights
from .features import block_slices, check_dims, design_matrix, embedding_frequencies

logger = logging.getLogger(__name__)

MIN_L2 = 1e-6


@dataclass(frozen=True)
class CrossFitPlan:
    """
    Partition of the records into folds.

    Attributes:
        folds: Number of folds, at least 2.
        assignment: (n,) fold id of each record.
    """

    folds: int
    assignment: np.ndarray

    def __post_init__(self):
        assignment = np.array(self.assignment, dtype=np.int64)
        if set(np.unique(assignment).tolist()) != set(range(self.folds)):
            raise EstimatorInputError(f"every one of the {self.folds} folds needs at least one record")
        assignment.setflags(write=False)
        object.__setattr__(self, "assignment", assignment)

    def __len__(self) -> int:
        return self.assignment.size

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)


def make_cross_fit_plan(n: int, folds: int = 2, seed: int = 0) -> CrossFitPlan:
    """
    Shuffled K-fold plan over n records.

    Raises:
        ValueError: If folds < 2 or n < 2 * folds.
    """
    check_scalar(folds, "folds", numbers.Integral, min_val=2)
    check_scalar(n, "n", numbers.Integral, min_val=2 * folds)
    assignment = np.empty(n, dtype=np.int64)
    splitter = KFold(n_splits=folds, shuffle=True, random_state=seed)
    for fold, (_, test) in enumerate(splitter.split(np.zeros((n, 1)))):
        assignment[test] = fold
    return CrossFitPlan(folds=folds, assignment=assignment)


@dataclass(frozen=True)
class RidgeHyper:
    """Ridge penalty (floored at 1e-6) and the seed of the default fold plan."""

    l2: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        check_scalar(self.l2, "l2", numbers.Real, min_val=0.0)
        check_scalar(self.seed, "seed", numbers.Integral, min_val=0)


@dataclass(frozen=True, eq=False)
class CrossFittedRewardModel:
    """
    Per-fold ridge models and per-fold embedding models.

    Attributes:
        provenance: ``plain`` or ``mrdr``.
        plan: Fold assignment; fold f is scored by ``fold_models[f]``.
        dims: Embedding dimensions in the feature map.
        embedding_cardinalities: |E_k| for every dimension of the data.
        context_dim: d_x.
        fold_models: Fitted ``sklearn.linear_model.Ridge`` per fold.
        fold_embed_probs: Per fold, one (|A|, |E_k|) matrix per entry of ``dims``.
    """

    provenance: str
    plan: CrossFitPlan
    dims: Tuple[int, ...]
    embedding_cardinalities: Tuple[int, ...]
    context_dim: int
    fold_models: Tuple[Ridge, ...]
    fold_embed_probs: Tuple[Tuple[np.ndarray, ...], ...]

    def _check(self, data: LoggedDataset):
        if len(data) != len(self.plan):
            raise EstimatorInputError(
                f"cross-fitted model covers {len(self.plan)} records, got a dataset of {len(data)}"
            )

    def predict_xe(self, data: LoggedDataset) -> np.ndarray:
        """(n,) out-of-fold predictions q_hat(x_i, e_i)."""
        self._check(data)
        X = design_matrix(data.context, data.embedding, self.dims, self.embedding_cardinalities, bias=False)
        out = np.empty(len(data))
        for fold, model in enumerate(self.fold_models):
            test = self.plan.test_indices(fold)
            out[test] = model.predict(X[test])
        return out

    def predict_xa(self, data: LoggedDataset) -> np.ndarray:
        """(n, |A|) out-of-fold predictions q_hat(x_i, a)."""
        self._check(data)
        out = np.empty((len(data), self.fold_embed_probs[0][0].shape[0]))
        slices = block_slices(self.context_dim, self.dims, self.embedding_cardinalities)
        for fold, model in enumerate(self.fold_models):
            test = self.plan.test_indices(fold)
            coef = model.coef_
            per_action = sum(probs @ coef[sl] for probs, sl in zip(self.fold_embed_probs[fold], slices))
            out[test] = (data.context[test] @ coef[: self.context_dim] + model.intercept_)[:, None] + per_action[None, :]
        return out


def _fold_embed_probs(
    data: LoggedDataset,
    train: np.ndarray,
    dims: Tuple[int, ...],
    embed_probs: Optional[Sequence[np.ndarray]],
) -> Tuple[np.ndarray, ...]:
    if embed_probs is not None:
        return tuple(np.asarray(embed_probs[k], dtype=float) for k in dims)
    return tuple(
        embedding_frequencies(
            data.action[train], data.embedding[train, k], data.num_actions, data.embedding_cardinalities[k]
        )
        for k in dims
    )


def fit_reward_model(
    data: LoggedDataset,
    plan: Optional[CrossFitPlan] = None,
    hyper: Optional[RidgeHyper] = None,
    embed_probs: Optional[Sequence[np.ndarray]] = None,
    dims: Optional[Sequence[int]] = None,
    sample_weight: Optional[np.ndarray] = None,
    provenance: str = "plain",
) -> CrossFittedRewardModel:
    """
    Cross-fit ridge regressions of r on context ⊕ one-hot(e).

    Args:
        data: Logged data.
        plan: Fold plan; defaults to 2 shuffled folds seeded by ``hyper.seed``.
        hyper: Ridge hyperparameters.
        embed_probs: Optional per-dimension (|A|, |E_k|) matrices p(e_k|a)
            for every embedding dimension; used to marginalise q_hat(x, e)
            into q_hat(x, a). Empirical fold frequencies are used without it.
        dims: Embedding dimensions in the feature map; defaults to the
            observed ones.
        sample_weight: Optional (n,) non-negative regression weights.
        provenance: Tag carried by the model.

    Raises:
        ValueError: If the data has fewer than 2 records per fold.
        EstimatorInputError: If the weights are malformed.
    """
    hyper = hyper or RidgeHyper()
    plan = plan or make_cross_fit_plan(len(data), 2, hyper.seed)
    if len(plan) != len(data):
        raise EstimatorInputError(f"plan covers {len(plan)} records, dataset has {len(data)}")
    if len(data) < 2 * plan.folds:
        raise ValueError(f"cross-fitting needs n >= 2 * folds, got n={len(data)} and {plan.folds} folds")
    dims = check_dims(data.observed_dims if dims is None else dims, data.observed_dims)
    if sample_weight is None:
        sample_weight = np.ones(len(data))
    sample_weight = np.asarray(sample_weight, dtype=float)
    if sample_weight.shape != (len(data),) or not np.all(np.isfinite(sample_weight)) or np.any(sample_weight < 0):
        raise EstimatorInputError("sample weights must be one finite, non-negative value per record")

    X = design_matrix(data.context, data.embedding, dims, data.embedding_cardinalities, bias=False)
    alpha = max(hyper.l2, MIN_L2)
    models: List[Ridge] = []
    fold_probs = []
    for fold in range(plan.folds):
        train = plan.train_indices(fold)
        weights = sample_weight[train]
        if weights.sum() <= 0:
            logger.warning(f"Fold {fold}: all regression weights are zero; fitting unweighted")
            weights = np.ones_like(weights)
        model = Ridge(alpha=alpha, solver="svd", fit_intercept=True)
        model.fit(X[train], data.reward[train], sample_weight=weights)
        models.append(model)
        fold_probs.append(_fold_embed_probs(data, train, dims, embed_probs))
        logger.debug(f"Fold {fold}: {provenance} ridge fitted on {train.size} records")

    logger.info(f"Fitted {provenance} reward model on dims {dims} with {plan.folds}-fold cross-fitting")
    return CrossFittedRewardModel(
        provenance=provenance,
        plan=plan,
        dims=dims,
        embedding_cardinalities=data.embedding_cardinalities,
        context_dim=data.context_dim,
        fold_models=tuple(models),
        fold_embed_probs=tuple(fold_probs),
    )


def fit_mrdr_reward_model(
    data: LoggedDataset,
    target: Policy,
    plan: Optional[CrossFitPlan] = None,
    hyper: Optional[RidgeHyper] = None,
    embed_probs: Optional[Sequence[np.ndarray]] = None,
    dims: Optional[Sequence[int]] = None,
) -> CrossFittedRewardModel:
    """
    MRDR reward model: the same regression weighted by w(x_i, a_i)^2.

    With target = logging every weight is 1 and the fit equals
    ``fit_reward_model`` exactly.
    """
    weights = logged_weights(data, target) ** 2
    return fit_reward_model(
        data,
        plan=plan,
        hyper=hyper,
        embed_probs=embed_probs,
        dims=dims,
        sample_weight=weights,
        provenance="mrdr",
    )
