"""
Action posterior pi_0_hat(a | x, e) by multinomial logistic regression.

The model is fitted from scratch with deterministic full-batch gradient
descent and an Armijo backtracking line search, so identical data always
produce identical parameters. Estimated marginal weights follow as
w_hat(x, e) = sum_a pi_0_hat(a | x, e) pi(a|x) / pi_0(a|x).
"""

from dataclasses import dataclass, field
from typing import Optional, Protocol, Sequence, Tuple
import logging
import numbers

import numpy as np
from scipy.special import logsumexp, softmax
from sklearn.utils import check_scalar

from ..core.dataset import LoggedDataset
from ..core.policies import Policy
from .features import check_dims, design_matrix

logger = logging.getLogger(__name__)

_ARMIJO = 1e-4
_MAX_BACKTRACKS = 60
_PRIOR_COUNT = 0.5


@dataclass(frozen=True)
class PosteriorHyper:
    """
    Fitting hyperparameters.

    Attributes:
        l2: Penalty on the non-bias weights.
        max_iters: Gradient-descent iteration cap.
        tol: Stop once the gradient norm is at most this.
        seed: Recorded with the model; the fit itself uses no randomness.
    """

    l2: float = 1e-2
    max_iters: int = 500
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        check_scalar(self.l2, "l2", numbers.Real, min_val=0.0)
        check_scalar(self.max_iters, "max_iters", numbers.Integral, min_val=0)
        check_scalar(self.tol, "tol", numbers.Real, min_val=0.0)
        check_scalar(self.seed, "seed", numbers.Integral, min_val=0)


class ActionPosterior(Protocol):
    """Anything that maps (context, full embedding) rows to (n, |A|) action probabilities."""

    def predict_proba(self, context: np.ndarray, embedding: np.ndarray) -> np.ndarray:
        ...


@dataclass(frozen=True, eq=False)
class ActionPosteriorModel:
    """
    Fitted multinomial logistic regression of a on (x, e_dims).

    Attributes:
        weights: (|A|, d_x + sum_k |E_k| + 1); the last column is the bias.
        dims: Embedding dimensions the model reads.
        embedding_cardinalities: |E_k| for every dimension of the data.
        iterations: Accepted gradient steps.
        loss_trace: Objective after each accepted step, starting at the init.
        converged: Whether the gradient-norm tolerance was reached.
        degenerate: Only one action occurred; the model is constant.
        hyper: Hyperparameters used.
    """

    weights: np.ndarray
    dims: Tuple[int, ...]
    embedding_cardinalities: Tuple[int, ...]
    iterations: int
    loss_trace: Tuple[float, ...]
    converged: bool
    degenerate: bool = False
    hyper: PosteriorHyper = field(default_factory=PosteriorHyper)

    @property
    def num_actions(self) -> int:
        return self.weights.shape[0]

    @property
    def final_loss(self) -> float:
        return self.loss_trace[-1]

    def predict_proba(self, context: np.ndarray, embedding: np.ndarray) -> np.ndarray:
        """(n, |A|) posterior probabilities; ``embedding`` carries every dimension."""
        X = design_matrix(context, embedding, self.dims, self.embedding_cardinalities)
        return softmax(X @ self.weights.T, axis=1)


def multinomial_loss_and_grad(
    weights: np.ndarray,
    X: np.ndarray,
    y: np.ndarray,
    l2: float,
    penalty_mask: Optional[np.ndarray] = None,
) -> Tuple[float, np.ndarray]:
    """
    Mean cross-entropy plus (l2 / 2) ||weights * mask||^2, and its gradient.

    Args:
        weights: (K, p) class weights.
        X: (n, p) features.
        y: (n,) class labels in [0, K).
        l2: Penalty strength.
        penalty_mask: (p,) 0/1 mask of penalised columns; all ones if omitted.
    """
    n = X.shape[0]
    mask = np.ones(X.shape[1]) if penalty_mask is None else np.asarray(penalty_mask, dtype=float)
    scores = X @ weights.T
    log_norm = logsumexp(scores, axis=1)
    penalised = weights * mask[None, :]
    loss = float(np.mean(log_norm - scores[np.arange(n), y]) + 0.5 * l2 * np.sum(penalised**2))
    residual = np.exp(scores - log_norm[:, None])
    residual[np.arange(n), y] -= 1.0
    grad = residual.T @ X / n + l2 * penalised
    return loss, grad


def _constant_model(data: LoggedDataset, dims: Tuple[int, ...], num_features: int, hyper: PosteriorHyper) -> ActionPosteriorModel:
    only = int(data.action[0])
    logger.warning(f"Only action {only} occurs in the data; using a constant action posterior")
    weights = np.zeros((data.num_actions, num_features))
    weights[:, -1] = -np.inf
    weights[only, -1] = 0.0
    weights.setflags(write=False)
    return ActionPosteriorModel(
        weights=weights,
        dims=dims,
        embedding_cardinalities=data.embedding_cardinalities,
        iterations=0,
        loss_trace=(0.0,),
        converged=True,
        degenerate=True,
        hyper=hyper,
    )


def fit_action_posterior(
    data: LoggedDataset,
    dims: Optional[Sequence[int]] = None,
    hyper: Optional[PosteriorHyper] = None,
) -> ActionPosteriorModel:
    """
    Fit pi_0_hat(a | x, e_dims) on logged data.

    The bias column starts at the log of the smoothed empirical action
    frequencies and is not penalised, so a very large l2 leaves the model
    at the empirical action marginal.

    Args:
        data: Logged data.
        dims: Embedding dimensions to condition on; defaults to every
            observed dimension. Withheld dimensions are rejected.
        hyper: Hyperparameters; defaults to ``PosteriorHyper()``.

    Returns:
        The fitted model. With a single observed action the model is the
        constant posterior on that action and ``degenerate`` is set.

    Raises:
        EstimatorInputError: If ``dims`` is empty or not observed.
    """
    hyper = hyper or PosteriorHyper()
    dims = check_dims(data.observed_dims if dims is None else dims, data.observed_dims)
    X = design_matrix(data.context, data.embedding, dims, data.embedding_cardinalities)
    n, p = X.shape
    A = data.num_actions

    if np.unique(data.action).size == 1:
        return _constant_model(data, dims, p, hyper)
    if n < A:
        logger.warning(f"Fitting the action posterior with n={n} < |A|={A}; unseen actions get vanishing mass")

    counts = np.bincount(data.action, minlength=A).astype(float)
    weights = np.zeros((A, p))
    weights[:, -1] = np.log((counts + _PRIOR_COUNT) / (n + _PRIOR_COUNT * A))
    mask = np.ones(p)
    mask[-1] = 0.0

    loss, grad = multinomial_loss_and_grad(weights, X, data.action, hyper.l2, mask)
    trace = [loss]
    step = 1.0
    converged = False
    iterations = 0
    for _ in range(hyper.max_iters):
        grad_sq = float(np.sum(grad**2))
        if np.sqrt(grad_sq) <= hyper.tol:
            converged = True
            break
        step = min(2.0 * step, 1e3)
        for _ in range(_MAX_BACKTRACKS):
            candidate = weights - step * grad
            new_loss, new_grad = multinomial_loss_and_grad(candidate, X, data.action, hyper.l2, mask)
            if new_loss <= loss - _ARMIJO * step * grad_sq:
                break
            step *= 0.5
        else:
            logger.debug(f"Line search stalled after {iterations} iterations (loss {loss:.6g})")
            break
        weights, loss, grad = candidate, new_loss, new_grad
        trace.append(loss)
        iterations += 1
    else:
        converged = float(np.linalg.norm(grad)) <= hyper.tol

    weights.setflags(write=False)
    logger.info(
        f"Fitted action posterior on dims {dims} in {iterations} iterations "
        f"(loss {loss:.6g}, converged={converged})"
    )
    return ActionPosteriorModel(
        weights=weights,
        dims=dims,
        embedding_cardinalities=data.embedding_cardinalities,
        iterations=iterations,
        loss_trace=tuple(trace),
        converged=converged,
        hyper=hyper,
    )


@dataclass(frozen=True)
class EstimatedWeights:
    """
    Estimated marginal weights with the posterior mass that had to be skipped.

    Attributes:
        weights: (n,) w_hat(x_i, e_i).
        skipped_mass: (n,) posterior mass on actions with pi_0(a|x_i) = 0.
    """

    weights: np.ndarray
    skipped_mass: np.ndarray

    @property
    def total_skipped(self) -> float:
        return float(self.skipped_mass.sum())


def posterior_weights(data: LoggedDataset, target: Policy, logging_policy: Policy, posterior: ActionPosterior) -> EstimatedWeights:
    """
    w_hat_i = sum over supported a of pi_0_hat(a|x_i,e_i) pi(a|x_i) / pi_0(a|x_i).

    Actions with pi_0(a|x_i) = 0 have no vanilla weight; their posterior
    mass is left out of the sum and reported in ``skipped_mass``.
    """
    post = posterior.predict_proba(data.context, data.embedding)
    pi = target.action_dist(data.context)
    pi0 = logging_policy.action_dist(data.context)
    supported = pi0 > 0
    vanilla = np.divide(pi, pi0, out=np.zeros_like(pi), where=supported)
    weights = np.einsum("ij,ij->i", post, vanilla)
    skipped = np.where(supported, 0.0, post).sum(axis=1)
    if np.any(skipped > 0):
        logger.warning(
            f"Skipped posterior mass on unsupported actions: total {skipped.sum():.4g}, max {skipped.max():.4g}"
        )
    return EstimatedWeights(weights=weights, skipped_mass=skipped)


def estimate_marginal_weights(data: LoggedDataset, target: Policy, logging_policy: Policy, posterior: ActionPosterior) -> np.ndarray:
    """
    (n,) estimated marginal weights E_{pi_0_hat(a|x_i,e_i)}[w(x_i, a)].

    Example:
        A posterior that puts all mass on the logged action gives back the
        vanilla weights, i.e. MIPS reduces to IPS.
    """
    return posterior_weights(data, target, logging_policy, posterior).weights
