"""
Bootstrap distribution of squared errors relative to IPS.

On-policy data from the target policy gives the reference value V_on (its
mean reward). Each of T bootstrap resamples of the logging data is fed to
every estimator, and the squared error of each estimator is divided by
that of IPS on the same resample. The sorted ratios define an empirical
CDF per estimator; values below 1 mean the estimator beat IPS.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import numbers

import numpy as np
import pandas as pd
from sklearn.utils import check_scalar

from ..core.dataset import LoggedDataset
from ..core.errors import EstimatorInputError
from ..core.policies import Policy
from ..estimators import ips
from ..slope import DEFAULT_DELTA
from ..synthgen import SyntheticEnvironment
from ..synthgen.seeding import BOOTSTRAP, stream_rng
from .roster import ReplicationContext, check_roster, evaluate_roster

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CdfTable:
    """
    Sorted relative squared errors per estimator.

    Attributes:
        on_policy_value: V_on, the reference value.
        relative_errors: Estimator name -> sorted rel-SE values over the
            resamples it completed.
        flagged: Resample indices dropped because IPS was exact on them.
        failures: (estimator, resample, reason) for estimator failures.
    """

    on_policy_value: float
    relative_errors: Dict[str, np.ndarray]
    flagged: Tuple[int, ...] = ()
    failures: Tuple[Tuple[str, int, str], ...] = field(default=())

    def cdf(self, estimator: str, z: float) -> float:
        """F(z) = fraction of resamples with rel-SE <= z."""
        values = self.relative_errors[estimator]
        if values.size == 0:
            return float("nan")
        return float(np.searchsorted(values, z, side="right") / values.size)

    def to_frame(self) -> pd.DataFrame:
        """Columns estimator, rank, relative_squared_error, cdf; one row per CDF step."""
        frames = []
        for name, values in self.relative_errors.items():
            frames.append(
                pd.DataFrame(
                    {
                        "estimator": name,
                        "rank": np.arange(1, values.size + 1),
                        "relative_squared_error": values,
                        "cdf": np.arange(1, values.size + 1) / max(values.size, 1),
                    }
                )
            )
        if not frames:
            return pd.DataFrame(columns=["estimator", "rank", "relative_squared_error", "cdf"])
        return pd.concat(frames, ignore_index=True)


def bootstrap_cdf(
    on_policy_data: LoggedDataset,
    logging_data: LoggedDataset,
    roster: Sequence[str],
    n: int,
    replications: int,
    target: Policy,
    logging_policy: Policy,
    env: Optional[SyntheticEnvironment] = None,
    seed: int = 0,
    delta: float = DEFAULT_DELTA,
) -> CdfTable:
    """
    Bootstrap relative-squared-error CDFs.

    Args:
        on_policy_data: Data logged by ``target``; only its rewards are used.
        logging_data: Data logged by ``logging_policy``.
        roster: Estimator names.
        n: Resample size. Sampling is with replacement, so n may exceed
            ``len(logging_data)``.
        replications: T, the number of resamples.
        target: Policy being evaluated.
        logging_policy: Policy behind ``logging_data``.
        env: Synthetic environment for estimators that need it (``mips-true``).
        seed: Master seed of the bootstrap stream; resample t is keyed by t.
        delta: SLOPE++ confidence level.

    Raises:
        EstimatorInputError: If either dataset is empty.
    """
    if len(on_policy_data) == 0 or len(logging_data) == 0:
        raise EstimatorInputError("both the on-policy and the logging dataset must be non-empty")
    check_scalar(n, "n", numbers.Integral, min_val=1)
    check_scalar(replications, "replications", numbers.Integral, min_val=1)
    roster = check_roster(roster)
    if n > len(logging_data):
        logger.warning(f"Resample size {n} exceeds the {len(logging_data)} logged records")

    v_on = float(np.mean(on_policy_data.reward))
    ratios: Dict[str, List[float]] = {name: [] for name in roster}
    flagged: List[int] = []
    failures: List[Tuple[str, int, str]] = []
    for t in range(replications):
        rng = stream_rng(seed, BOOTSTRAP, t)
        resample = logging_data.subset(rng.integers(0, len(logging_data), size=n))
        ips_error = (v_on - ips(resample, target).estimate) ** 2
        if ips_error == 0.0:
            logger.warning(f"Resample {t}: IPS squared error is exactly 0; resample dropped")
            flagged.append(t)
            continue
        ctx = ReplicationContext(resample, target, logging_policy, env=env, seed=seed, replication=t, delta=delta)
        records, failed = evaluate_roster(ctx, roster)
        for name, record in records.items():
            ratios[name].append((v_on - record.estimate) ** 2 / ips_error)
        failures += [(name, t, reason) for name, reason in failed.items()]
        logger.debug(f"Resample {t} done")

    logger.info(f"Bootstrap CDF over {replications - len(flagged)} resamples of size {n} (V_on={v_on:.6f})")
    return CdfTable(
        on_policy_value=v_on,
        relative_errors={name: np.sort(np.asarray(values, dtype=float)) for name, values in ratios.items()},
        flagged=tuple(flagged),
        failures=tuple(failures),
    )
