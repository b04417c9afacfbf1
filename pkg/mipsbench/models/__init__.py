"""
Learned components: the action posterior and cross-fitted reward models.
"""

from .features import design_matrix, embedding_frequencies, one_hot_embedding
from .posterior import (
    ActionPosterior,
    ActionPosteriorModel,
    EstimatedWeights,
    PosteriorHyper,
    estimate_marginal_weights,
    fit_action_posterior,
    multinomial_loss_and_grad,
    posterior_weights,
)
from .reward import (
    CrossFitPlan,
    CrossFittedRewardModel,
    RidgeHyper,
    fit_mrdr_reward_model,
    fit_reward_model,
    make_cross_fit_plan,
)

__all__ = [
    "ActionPosterior",
    "ActionPosteriorModel",
    "CrossFitPlan",
    "CrossFittedRewardModel",
    "EstimatedWeights",
    "PosteriorHyper",
    "RidgeHyper",
    "design_matrix",
    "embedding_frequencies",
    "estimate_marginal_weights",
    "fit_action_posterior",
    "fit_mrdr_reward_model",
    "fit_reward_model",
    "make_cross_fit_plan",
    "multinomial_loss_and_grad",
    "one_hot_embedding",
    "posterior_weights",
]
