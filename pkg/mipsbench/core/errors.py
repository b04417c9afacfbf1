"""
Exception types raised by mipsbench.

Every exception subclasses the builtin that best describes it, so callers
may catch either the precise type or the generic one (``ValueError``,
``ZeroDivisionError``).
"""

from typing import Optional, Tuple


class MipsBenchError(Exception):
    """Root of all mipsbench exceptions."""


class InvalidEnvironmentError(MipsBenchError, ValueError):
    """Raised for non-finite scores, invalid distributions or inconsistent tensors."""


class EstimatorInputError(MipsBenchError, ValueError):
    """Raised when estimator inputs are malformed (negative or non-finite weights, bad lengths)."""


class DeficientSupportError(MipsBenchError, ZeroDivisionError):
    """
    Raised when an action has zero logging propensity.

    Attributes:
        action: The action id whose logging probability is zero.
    """

    def __init__(self, action: int, message: Optional[str] = None):
        self.action = int(action)
        super().__init__(message or f"logging policy assigns zero probability to action {self.action}")


class DeficientEmbeddingSupportError(MipsBenchError, ZeroDivisionError):
    """
    Raised when an embedding value has zero marginal probability under the logging policy.

    Attributes:
        embedding: The embedding value (as a tuple) with zero logging marginal.
    """

    def __init__(self, embedding: Tuple[int, ...], message: Optional[str] = None):
        self.embedding = tuple(int(v) for v in embedding)
        super().__init__(message or f"logging marginal p(e|x,pi_0) is zero for embedding {self.embedding}")


class AssumptionViolationError(MipsBenchError, ValueError):
    """
    Raised when an oracle precondition does not hold on a tabular instance.

    Attributes:
        assumption: Which assumption failed ("common_support",
            "common_embedding_support" or "no_direct_effect").
    """

    def __init__(self, assumption: str, message: Optional[str] = None):
        self.assumption = assumption
        super().__init__(message or f"assumption violated: {assumption}")
