"""
Policy protocol.

Estimators never see policy internals. They only ask a policy for its action
distribution at a batch of contexts, so anything with ``num_actions`` and an
``action_dist`` method can be evaluated: the synthetic logging and target
policies, a context-free table, or a custom policy.
"""

from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np

from .distributions import Distribution


@runtime_checkable
class Policy(Protocol):
    """
    Protocol for policies evaluated on logged contexts.

    Example:
        >>> class AlwaysFirst:
        ...     num_actions = 2
        ...     def action_dist(self, context):
        ...         return np.tile([1.0, 0.0], (len(context), 1))
        >>> isinstance(AlwaysFirst(), Policy)
        True
    """

    num_actions: int

    def action_dist(self, context: np.ndarray) -> np.ndarray:
        """
        Action probabilities at each context.

        Args:
            context: (n, d_x) array of contexts.

        Returns:
            (n, num_actions) array whose rows are distributions.
        """
        ...


@dataclass(frozen=True)
class FixedPolicy:
    """A context-independent policy that plays the same distribution everywhere."""

    distribution: Distribution

    @property
    def num_actions(self) -> int:
        return len(self.distribution)

    def action_dist(self, context: np.ndarray) -> np.ndarray:
        n = np.asarray(context).shape[0]
        return np.tile(self.distribution.probs, (n, 1))
