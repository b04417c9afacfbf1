"""
Per-seed results and their empirical MSE decomposition.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..synthgen import GroundTruth
from .sweep import SweepSpec


@dataclass(frozen=True)
class SeedEstimate:
    """One estimator's estimate on one seed at one swept value."""

    estimator: str
    value: Any
    seed: int
    estimate: float
    ground_truth: float

    @property
    def squared_error(self) -> float:
        return (self.estimate - self.ground_truth) ** 2


@dataclass(frozen=True)
class FailedEstimate:
    """An estimator that raised (or returned a non-finite value) on one seed."""

    estimator: str
    value: Any
    seed: int
    reason: str


@dataclass(frozen=True)
class AggregateRow:
    """
    Empirical MSE, squared bias and variance over the successful seeds.

    With errors d_t = estimate_t - V_t, ``squared_bias`` is mean(d)^2 and
    ``variance`` the population variance of d, so ``mse`` = mean(d^2) is
    their sum up to rounding. ``estimate`` and ``ground_truth`` are the
    averages over the same seeds.
    """

    estimator: str
    value: Any
    estimate: float
    ground_truth: float
    mse: float
    squared_bias: float
    variance: float
    successes: int
    failures: int

    @property
    def squared_error(self) -> float:
        return (self.estimate - self.ground_truth) ** 2


@dataclass(frozen=True)
class ExperimentReport:
    """
    Everything a sweep produced.

    Attributes:
        spec: The sweep that ran.
        estimates: Successful per-seed estimates, ordered by swept value,
            then seed, then roster position.
        failures: Failed (estimator, value, seed) triples with reasons.
        ground_truths: Ground truth per swept value (seed-averaged when the
            environment is resampled per seed).
    """

    spec: SweepSpec
    estimates: Tuple[SeedEstimate, ...] = ()
    failures: Tuple[FailedEstimate, ...] = ()
    ground_truths: Dict[Any, GroundTruth] = field(default_factory=dict)

    def per_seed(self, estimator: str, value: Any) -> List[SeedEstimate]:
        return [row for row in self.estimates if row.estimator == estimator and row.value == value]

    def failure_count(self, estimator: str, value: Any) -> int:
        return sum(1 for row in self.failures if row.estimator == estimator and row.value == value)

    def aggregate(self, estimator: str, value: Any) -> Optional[AggregateRow]:
        """Aggregate of one (estimator, value) cell; None when every seed failed."""
        rows = self.per_seed(estimator, value)
        if not rows:
            return None
        estimates = np.array([row.estimate for row in rows])
        truths = np.array([row.ground_truth for row in rows])
        errors = estimates - truths
        mean_error = errors.mean()
        return AggregateRow(
            estimator=estimator,
            value=value,
            estimate=float(estimates.mean()),
            ground_truth=float(truths.mean()),
            mse=float(np.mean(errors**2)),
            squared_bias=float(mean_error**2),
            variance=float(np.mean((errors - mean_error) ** 2)),
            successes=len(rows),
            failures=self.failure_count(estimator, value),
        )

    def aggregates(self) -> List[AggregateRow]:
        """Aggregate rows in roster order within swept-value order."""
        cells = [self.aggregate(name, value) for value in self.spec.values for name in self.spec.roster]
        return [cell for cell in cells if cell is not None]

    def mse_ratio(self, numerator: str, denominator: str) -> Dict[Any, float]:
        """MSE(numerator) / MSE(denominator) per swept value (inf when the denominator's MSE is 0)."""
        ratios = {}
        for value in self.spec.values:
            top, bottom = self.aggregate(numerator, value), self.aggregate(denominator, value)
            if top is None or bottom is None:
                continue
            ratios[value] = top.mse / bottom.mse if bottom.mse > 0 else float("inf")
        return ratios

    def failure_fraction(self, estimator: str, value: Any) -> float:
        return self.failure_count(estimator, value) / self.spec.replications

    def max_failure_fraction(self) -> float:
        fractions = [self.failure_fraction(name, value) for value in self.spec.values for name in self.spec.roster]
        return max(fractions, default=0.0)
