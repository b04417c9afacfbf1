"""
SLOPE++ estimator selection, embedding-dimension search and lambda tuning.
"""

from .search import (
    EmbeddingSelection,
    LambdaSelection,
    default_lambda_grid,
    select_embedding_dims,
    tune_lambda,
)
from .selection import DEFAULT_DELTA, SLOPE_CONSTANT, CandidateEstimate, cnf, slope_select

__all__ = [
    "DEFAULT_DELTA",
    "SLOPE_CONSTANT",
    "CandidateEstimate",
    "EmbeddingSelection",
    "LambdaSelection",
    "cnf",
    "default_lambda_grid",
    "select_embedding_dims",
    "slope_select",
    "tune_lambda",
]
