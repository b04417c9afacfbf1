"""
Results CSV and run manifest.

The CSV has one row per (estimator, swept value, seed) followed by one
aggregate row per (estimator, swept value) with ``seed = -1``. Only
aggregate rows fill ``mse``, ``squared_bias`` and ``variance``. Floats are
written with 17 significant digits, so the file parses back to the exact
in-memory values, and nothing time- or host-dependent is written, so
identical sweeps give identical bytes.
"""

from pathlib import Path
from typing import Any, Dict, List, Tuple
import json
import logging
import platform

import numpy as np
import pandas as pd
import scipy
import sklearn

from .. import __version__
from ..synthgen import seeding
from .report import ExperimentReport

logger = logging.getLogger(__name__)

RESULT_COLUMNS = [
    "estimator",
    "param",
    "value",
    "seed",
    "estimate",
    "ground_truth",
    "squared_error",
    "mse",
    "squared_bias",
    "variance",
]
AGGREGATE_SEED = -1


def manifest_path(path: Path | str) -> Path:
    """``results.csv`` -> ``results.manifest.json``."""
    path = Path(path)
    return path.with_name(f"{path.stem}.manifest.json")


def results_frame(report: ExperimentReport) -> pd.DataFrame:
    param = report.spec.param
    rows: List[Dict[str, Any]] = [
        {
            "estimator": row.estimator,
            "param": param,
            "value": row.value,
            "seed": row.seed,
            "estimate": row.estimate,
            "ground_truth": row.ground_truth,
            "squared_error": row.squared_error,
        }
        for row in report.estimates
    ]
    rows += [
        {
            "estimator": row.estimator,
            "param": param,
            "value": row.value,
            "seed": AGGREGATE_SEED,
            "estimate": row.estimate,
            "ground_truth": row.ground_truth,
            "squared_error": row.squared_error,
            "mse": row.mse,
            "squared_bias": row.squared_bias,
            "variance": row.variance,
        }
        for row in report.aggregates()
    ]
    return pd.DataFrame(rows, columns=RESULT_COLUMNS)


def build_manifest(report: ExperimentReport, results_name: str) -> Dict[str, Any]:
    spec = report.spec
    return {
        "results": results_name,
        "fingerprint": spec.fingerprint,
        "spec": spec.to_dict(),
        "seeds": {
            "master": spec.base.seed,
            "replications": list(range(spec.replications)),
            "streams": {
                "environment": seeding.ENVIRONMENT,
                "data": seeding.DATA,
                "ground_truth": seeding.GROUND_TRUTH,
                "cross_fit": seeding.CROSS_FIT,
            },
        },
        "ground_truth": {
            str(value): {"value": truth.value, "stderr": truth.stderr, "m": truth.m}
            for value, truth in report.ground_truths.items()
        },
        "failures": {
            "count": len(report.failures),
            "max_fraction": report.max_failure_fraction(),
            "runs": [
                {"estimator": f.estimator, "value": f.value, "seed": f.seed, "reason": f.reason}
                for f in report.failures
            ],
        },
        "software": {
            "mipsbench": __version__,
            "numpy": np.__version__,
            "pandas": pd.__version__,
            "python": platform.python_version(),
            "scikit-learn": sklearn.__version__,
            "scipy": scipy.__version__,
        },
    }


def emit_report(report: ExperimentReport, path: Path | str) -> Tuple[Path, Path]:
    """
    Write the results CSV to ``path`` and the manifest next to it.

    Returns:
        (csv path, manifest path).

    Raises:
        OSError: If a file cannot be written; the message names the path.
    """
    path = Path(path)
    manifest_file = manifest_path(path)
    manifest = build_manifest(report, path.name)
    try:
        results_frame(report).to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
        manifest_file.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    except OSError as e:
        raise OSError(f"Could not write results to {path}: {e}") from e
    logger.info(f"Wrote {len(report.estimates)} seed rows to {path} and the manifest to {manifest_file}")
    return path, manifest_file


def read_results_csv(path: Path | str) -> pd.DataFrame:
    """
    Parse a results CSV back into a frame with the ``RESULT_COLUMNS`` schema.

    Raises:
        FileNotFoundError: If ``path`` does not exist.
        ValueError: If the header is not the results header.
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype={"estimator": str, "param": str}, float_precision="round_trip")
    except FileNotFoundError as e:
        raise FileNotFoundError(f"Results file not found: {path}") from e
    if list(frame.columns) != RESULT_COLUMNS:
        raise ValueError(f"{path}: unexpected header {list(frame.columns)}")
    return frame
