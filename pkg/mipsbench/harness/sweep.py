"""
Sweep specification.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Literal, Sequence, Tuple
import hashlib
import json
import numbers

from sklearn.utils import check_scalar

from ..slope import DEFAULT_DELTA
from ..synthgen import GROUND_TRUTH_CONTEXTS, SyntheticConfig
from .grids import DEFAULT_ROSTER, EXPERIMENTS, INTEGER_PARAMS, SWEEP_PARAMS, default_values
from .roster import check_roster

TargetKind = Literal["epsilon-greedy", "logging"]


def _coerce_values(param: str, values: Sequence[Any]) -> Tuple[Any, ...]:
    coerced = []
    for value in values:
        if param in INTEGER_PARAMS:
            if float(value) != int(float(value)):
                raise ValueError(f"{param} takes integer values, got {value!r}")
            coerced.append(int(float(value)))
        else:
            coerced.append(float(value))
    return tuple(coerced)


@dataclass(frozen=True)
class SweepSpec:
    """
    One parameter sweep over replicated synthetic experiments.

    Attributes:
        param: Swept parameter, one of ``SWEEP_PARAMS``. ``num_deficient``
            sets |U_0|, ``withheld_count`` hides the last k embedding
            dimensions and ``sigma`` sets the reward noise.
        values: Non-empty list of values for ``param``.
        base: Config every swept value starts from.
        roster: Estimator names, non-empty.
        n: Sample size when ``param`` is not ``n``.
        replications: T, number of seeds per value.
        ground_truth_m: Contexts for the Monte-Carlo ground truth.
        target: ``"epsilon-greedy"`` evaluates the target policy;
            ``"logging"`` evaluates the logging policy on its own data.
        resample_environment: Draw a fresh environment for every seed
            instead of keeping it fixed per swept value.
        delta: SLOPE++ confidence level.
        folds: Cross-fitting folds for the reward models.
        workers: Worker processes; 1 runs in-process. Does not affect results.

    Raises:
        ValueError, TypeError: On an unknown parameter, an empty value list,
            an unknown estimator or an out-of-range field.
    """

    param: str
    values: Tuple[Any, ...]
    base: SyntheticConfig = field(default_factory=SyntheticConfig)
    roster: Tuple[str, ...] = DEFAULT_ROSTER
    n: int = 10_000
    replications: int = 100
    ground_truth_m: int = GROUND_TRUTH_CONTEXTS
    target: TargetKind = "epsilon-greedy"
    resample_environment: bool = False
    delta: float = DEFAULT_DELTA
    folds: int = 2
    workers: int = 1

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise ValueError(f"unknown sweep parameter {self.param!r}; expected one of {', '.join(SWEEP_PARAMS)}")
        if len(self.values) == 0:
            raise ValueError("the value list is empty")
        object.__setattr__(self, "values", _coerce_values(self.param, self.values))
        object.__setattr__(self, "roster", check_roster(self.roster))
        check_scalar(self.n, "n", numbers.Integral, min_val=1)
        check_scalar(self.replications, "replications", numbers.Integral, min_val=1)
        check_scalar(self.ground_truth_m, "ground_truth_m", numbers.Integral, min_val=1)
        check_scalar(self.delta, "delta", numbers.Real, min_val=0.0, max_val=1.0, include_boundaries="neither")
        check_scalar(self.folds, "folds", numbers.Integral, min_val=2)
        check_scalar(self.workers, "workers", numbers.Integral, min_val=1)
        if self.target not in ("epsilon-greedy", "logging"):
            raise ValueError(f"unknown target {self.target!r}")
        for value in self.values:
            self.point(value)

    @classmethod
    def from_experiment(cls, name: str, **overrides: Any) -> "SweepSpec":
        """Spec of a named experiment preset; ``values`` defaults to the desk grid."""
        if name not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {name!r}; available: {', '.join(EXPERIMENTS)}")
        experiment = EXPERIMENTS[name]
        base = overrides.pop("base", SyntheticConfig()).with_(**experiment.config)
        fields = {"param": experiment.param, "values": default_values(experiment.param), "n": experiment.n, "roster": experiment.roster}
        fields.update(overrides)
        return cls(base=base, **fields)

    def point(self, value: Any) -> Tuple[SyntheticConfig, int]:
        """Config and sample size at one swept value."""
        if self.param == "n":
            check_scalar(value, "n", numbers.Integral, min_val=1)
            return self.base, int(value)
        if self.param == "num_actions":
            config = self.base.with_(num_actions=value)
        elif self.param == "num_deficient":
            config = self.base.with_(num_deficient_actions=value)
        elif self.param == "withheld_count":
            check_scalar(value, "withheld_count", numbers.Integral, min_val=0, max_val=self.base.embed_dims)
            d_e = self.base.embed_dims
            config = self.base.with_(withheld_dims=tuple(range(d_e - value, d_e)))
        elif self.param == "beta":
            config = self.base.with_(beta=value)
        elif self.param == "epsilon":
            config = self.base.with_(epsilon=value)
        else:
            config = self.base.with_(reward_noise=value)
        return config, self.n

    def with_(self, **changes: Any) -> "SweepSpec":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        """Everything that determines the results; ``workers`` is left out."""
        return {
            "param": self.param,
            "values": list(self.values),
            "base": self.base.to_dict(),
            "roster": list(self.roster),
            "n": self.n,
            "replications": self.replications,
            "ground_truth_m": self.ground_truth_m,
            "target": self.target,
            "resample_environment": self.resample_environment,
            "delta": self.delta,
            "folds": self.folds,
        }

    @property
    def fingerprint(self) -> str:
        """Short stable hash of ``to_dict()``."""
        payload = json.dumps(self.to_dict(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()[:16]
