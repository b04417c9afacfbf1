"""
SLOPE++ estimator selection.

Candidates are ordered by non-increasing confidence half-width CNF; the
selected candidate is the largest m such that for every j < m

    |V_m - V_j| <= CNF(m) + (sqrt(6) - 1) CNF(j).
"""

from dataclasses import dataclass
from typing import Any, Hashable, Sequence
import logging
import math
import numbers

import numpy as np
from scipy import stats
from sklearn.utils import check_scalar

from ..core.errors import EstimatorInputError
from ..estimators.base import EstimateRecord

logger = logging.getLogger(__name__)

SLOPE_CONSTANT = math.sqrt(6.0) - 1.0
DEFAULT_DELTA = 0.05


def cnf(per_sample_terms: np.ndarray, delta: float = DEFAULT_DELTA) -> float:
    """
    Student-t half-width t_{1-delta/2, n-1} * std(terms) / sqrt(n).

    Raises:
        EstimatorInputError: If there are fewer than two terms.
        ValueError: If delta is outside (0, 1).

    Example:
        >>> round(cnf(np.array([0.0, 0.0, 2.0, 2.0])), 4)
        1.8374
    """
    check_scalar(delta, "delta", numbers.Real, min_val=0.0, max_val=1.0, include_boundaries="neither")
    terms = np.asarray(per_sample_terms, dtype=float)
    n = terms.size
    if n < 2:
        raise EstimatorInputError(f"a confidence half-width needs at least 2 terms, got {n}")
    std = float(terms.std(ddof=1))
    if std == 0.0:
        return 0.0
    return float(stats.t.ppf(1.0 - delta / 2.0, n - 1)) * std / math.sqrt(n)


@dataclass(frozen=True)
class CandidateEstimate:
    """
    One candidate for selection.

    Attributes:
        label: What distinguishes the candidate (a dim subset, a lambda).
        estimate: Its value estimate.
        cnf: Confidence half-width, finite and non-negative.
        per_sample_terms: Summands of the estimate.
        record: The full EstimateRecord, when there is one.
    """

    label: Hashable
    estimate: float
    cnf: float
    per_sample_terms: Any = None
    record: Any = None

    def __post_init__(self):
        if not (math.isfinite(self.cnf) and self.cnf >= 0.0):
            raise EstimatorInputError(f"candidate {self.label!r}: cnf must be finite and >= 0, got {self.cnf!r}")

    @classmethod
    def from_record(cls, label: Hashable, record: EstimateRecord, delta: float = DEFAULT_DELTA) -> "CandidateEstimate":
        return cls(
            label=label,
            estimate=record.estimate,
            cnf=cnf(record.per_sample_terms, delta),
            per_sample_terms=record.per_sample_terms,
            record=record,
        )


def slope_select(candidates: Sequence[CandidateEstimate]) -> int:
    """
    Index (in the caller's order) of the candidate SLOPE++ selects.

    The candidates are sorted internally by non-increasing cnf (stable, so
    ties keep the caller's order) and the result is mapped back.

    Raises:
        EstimatorInputError: If ``candidates`` is empty.

    Example:
        (V, CNF) = (0.0, 1.0), (0.1, 0.5), (5.0, 0.1) selects index 1.
    """
    if not candidates:
        raise EstimatorInputError("slope_select needs at least one candidate")
    widths = np.array([c.cnf for c in candidates])
    order = np.argsort(-widths, kind="stable")
    values = np.array([candidates[i].estimate for i in order])
    sorted_widths = widths[order]

    best = 0
    for m in range(1, len(order)):
        gaps = np.abs(values[m] - values[:m])
        if np.all(gaps <= sorted_widths[m] + SLOPE_CONSTANT * sorted_widths[:m]):
            best = m
    chosen = int(order[best])
    logger.debug(f"SLOPE selected candidate {candidates[chosen].label!r} ({best + 1} of {len(order)} by cnf)")
    return chosen
