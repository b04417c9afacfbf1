"""
Replication engine.

For every swept value the environment and its ground truth are built once;
seed t then draws its logged data from the data stream keyed by t and runs
the whole roster on it. Seeds run in-process or on a process pool and are
reduced in seed order, so the report does not depend on the worker count.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple
import logging

import numpy as np

from ..core.policies import Policy
from ..synthgen import (
    GroundTruth,
    LoggingPolicy,
    SyntheticConfig,
    SyntheticEnvironment,
    TargetPolicy,
    build_environment,
    ground_truth_value,
    sample_logged_data,
)
from ..synthgen.seeding import ENVIRONMENT, stream_seed
from .report import ExperimentReport, FailedEstimate, SeedEstimate
from .roster import ReplicationContext, evaluate_roster
from .sweep import SweepSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepPoint:
    """Picklable description of one swept value."""

    value: Any
    config: SyntheticConfig
    n: int
    spec: SweepSpec
    env: Optional[SyntheticEnvironment] = None
    ground_truth: Optional[GroundTruth] = None


@dataclass(frozen=True)
class SeedOutcome:
    value: Any
    seed: int
    ground_truth: float
    estimates: Dict[str, float]
    failures: Dict[str, str]


def _policies(env: SyntheticEnvironment, config: SyntheticConfig, spec: SweepSpec) -> Tuple[Policy, Policy]:
    logging_policy = LoggingPolicy(env, config)
    target = logging_policy if spec.target == "logging" else TargetPolicy(env, config)
    return target, logging_policy


def _environment(config: SyntheticConfig, spec: SweepSpec) -> Tuple[SyntheticEnvironment, GroundTruth]:
    env = build_environment(config)
    target, _ = _policies(env, config, spec)
    return env, ground_truth_value(env, config, spec.ground_truth_m, policy=target)


def run_seed(point: SweepPoint, seed: int) -> SeedOutcome:
    """Sample one dataset and evaluate the roster on it."""
    spec = point.spec
    config, env, truth = point.config, point.env, point.ground_truth
    if spec.resample_environment:
        config = config.with_(seed=stream_seed(config.seed, ENVIRONMENT, seed + 1))
        env, truth = _environment(config, spec)
    target, logging_policy = _policies(env, config, spec)
    try:
        data = sample_logged_data(env, config, point.n, replication=seed)
    except Exception as exc:
        logger.error(f"Sampling failed for {spec.param}={point.value}, seed {seed}: {exc}", exc_info=True)
        reason = f"{type(exc).__name__}: {exc}"
        return SeedOutcome(point.value, seed, truth.value, {}, {name: reason for name in spec.roster})
    ctx = ReplicationContext(
        data=data,
        target=target,
        logging_policy=logging_policy,
        env=env,
        seed=config.seed,
        replication=seed,
        delta=spec.delta,
        folds=spec.folds,
    )
    records, failures = evaluate_roster(ctx, spec.roster)
    return SeedOutcome(
        value=point.value,
        seed=seed,
        ground_truth=truth.value,
        estimates={name: record.estimate for name, record in records.items()},
        failures=failures,
    )


def _outcomes(points: List[SweepPoint], replications: int, workers: int) -> Iterable[SeedOutcome]:
    jobs = [(point, seed) for point in points for seed in range(replications)]
    if workers == 1:
        return (run_seed(point, seed) for point, seed in jobs)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(run_seed, *zip(*jobs)))


def run_replications(spec: SweepSpec, progress: Optional[Callable[[SeedOutcome], None]] = None) -> ExperimentReport:
    """
    Run every (swept value, seed) pair of ``spec`` and collect the results.

    Estimator failures are recorded per seed and left out of the
    aggregates; they never abort the sweep.

    Args:
        spec: The sweep.
        progress: Optional callback invoked with each finished seed.
    """
    points = []
    truths: Dict[Any, GroundTruth] = {}
    for value in spec.values:
        config, n = spec.point(value)
        if spec.resample_environment:
            points.append(SweepPoint(value, config, n, spec))
        else:
            env, truth = _environment(config, spec)
            truths[value] = truth
            points.append(SweepPoint(value, config, n, spec, env, truth))
        logger.info(f"Prepared {spec.param}={value} (n={n})")

    estimates: List[SeedEstimate] = []
    failures: List[FailedEstimate] = []
    seed_truths: Dict[Any, List[float]] = {value: [] for value in spec.values}
    for outcome in _outcomes(points, spec.replications, spec.workers):
        seed_truths[outcome.value].append(outcome.ground_truth)
        for name in spec.roster:
            if name in outcome.estimates:
                estimates.append(SeedEstimate(name, outcome.value, outcome.seed, outcome.estimates[name], outcome.ground_truth))
            elif name in outcome.failures:
                failures.append(FailedEstimate(name, outcome.value, outcome.seed, outcome.failures[name]))
        if progress is not None:
            progress(outcome)

    if spec.resample_environment:
        for value, values in seed_truths.items():
            stderr = float(np.std(values, ddof=1) / np.sqrt(len(values))) if len(values) > 1 else 0.0
            truths[value] = GroundTruth(value=float(np.mean(values)), stderr=stderr, m=spec.ground_truth_m)

    report = ExperimentReport(spec=spec, estimates=tuple(estimates), failures=tuple(failures), ground_truths=truths)
    if failures:
        logger.warning(f"{len(failures)} estimator runs failed; worst failure fraction {report.max_failure_fraction():.0%}")
    return report
