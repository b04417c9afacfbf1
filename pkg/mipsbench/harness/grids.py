"""
Swept parameters, their value grids and the named experiment presets.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

SWEEP_PARAMS = ("num_actions", "n", "num_deficient", "withheld_count", "beta", "epsilon", "sigma")
INTEGER_PARAMS = frozenset({"num_actions", "n", "num_deficient", "withheld_count"})

DESK_REPLICATIONS = 50

DESK_GRIDS: Dict[str, Tuple[float, ...]] = {
    "num_actions": (10, 100, 1000),
    "n": (800, 3200, 12800),
    "num_deficient": (0, 500, 900),
    "withheld_count": (0, 10, 18),
    "beta": (-3.0, -1.0, 1.0),
    "epsilon": (0.0, 0.4, 0.8),
    "sigma": (0.5, 2.5, 4.0),
}

FULL_GRIDS: Dict[str, Tuple[float, ...]] = {
    "num_actions": (10, 100, 500, 1000, 2000, 5000),
    "n": (800, 1600, 3200, 6400, 12800, 25600),
    "num_deficient": (0, 100, 300, 500, 700, 900),
    "withheld_count": tuple(range(0, 20, 2)),
    "beta": (-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0),
    "epsilon": (0.0, 0.2, 0.4, 0.6, 0.8, 1.0),
    "sigma": (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0),
}

DEFAULT_ROSTER = ("dm", "ips", "dr", "mips", "mips-true")

# d_e = 20 binary dimensions; dropping any of them breaks no-direct-effect
BINARY_EMBEDDINGS = {"embed_dims": 20, "embed_cardinality": 2}


@dataclass(frozen=True)
class Experiment:
    """A named sweep: which parameter moves, around which base config."""

    name: str
    param: str
    description: str
    config: Dict[str, Any] = field(default_factory=dict)
    n: int = 10_000
    roster: Tuple[str, ...] = DEFAULT_ROSTER


EXPERIMENTS: Dict[str, Experiment] = {
    experiment.name: experiment
    for experiment in (
        Experiment("actions", "num_actions", "MSE against the number of actions"),
        Experiment("sample-size", "n", "MSE against the sample size", config={"num_actions": 1000}),
        Experiment("deficiency", "num_deficient", "MSE against the number of deficient actions", config={"num_actions": 1000}),
        Experiment(
            "withheld",
            "withheld_count",
            "bias and variance against the number of unobserved embedding dimensions",
            config={"num_actions": 1000, **BINARY_EMBEDDINGS},
            roster=("ips", "mips", "mips-true"),
        ),
        Experiment(
            "slope",
            "n",
            "MIPS with and without embedding selection against the sample size",
            config={"num_actions": 1000, **BINARY_EMBEDDINGS},
            roster=("mips", "mips-slope"),
        ),
        Experiment("beta", "beta", "MSE against the logging policy's inverse temperature", config={"num_actions": 1000}),
        Experiment("epsilon", "epsilon", "MSE against the target policy's exploration rate", config={"num_actions": 1000}),
        Experiment("noise", "sigma", "MSE against the reward noise level", config={"num_actions": 1000}),
        Experiment(
            "baselines",
            "num_actions",
            "every baseline against the number of actions",
            roster=("dm", "ips", "dr", "mrdr", "switch-dr", "dros", "dr-lambda", "mips", "mips-true"),
        ),
    )
}


def default_values(param: str, full: bool = False) -> Tuple[float, ...]:
    """Grid for ``param``: the desk-scale one, or the full one with ``full``."""
    grids = FULL_GRIDS if full else DESK_GRIDS
    if param not in grids:
        raise ValueError(f"unknown sweep parameter {param!r}; expected one of {', '.join(SWEEP_PARAMS)}")
    return grids[param]
