"""
Dataset CSV export.
"""

from pathlib import Path
from typing import Any, Dict, Optional
import json
import logging

import pandas as pd

from ..core.dataset import LoggedDataset

logger = logging.getLogger(__name__)


def metadata_path(path: Path | str) -> Path:
    """Sidecar path for a dataset CSV: ``logged.csv`` -> ``logged.meta.json``."""
    path = Path(path)
    return path.with_name(f"{path.stem}.meta.json")


def dataset_frame(data: LoggedDataset) -> pd.DataFrame:
    """Columns x_*, action, e_*, reward, pscore in that order."""
    columns: Dict[str, Any] = {f"x_{j}": data.context[:, j] for j in range(data.context_dim)}
    columns["action"] = data.action
    columns.update({f"e_{k}": data.embedding[:, k] for k in range(data.embed_dims)})
    columns["reward"] = data.reward
    columns["pscore"] = data.pscore
    return pd.DataFrame(columns)


def write_dataset_csv(data: LoggedDataset, path: Path | str, config: Optional[Dict[str, Any]] = None) -> Path:
    """
    Write ``data`` as CSV plus a JSON sidecar.

    Floats are written with 17 significant digits so that reading the file
    back reproduces the arrays exactly.

    Args:
        data: Dataset to export. Withheld dimensions are written too; the
            mask goes into the sidecar.
        path: Destination CSV.
        config: Optional generating config (e.g. ``SyntheticConfig.to_dict()``)
            stored in the sidecar for provenance.

    Returns:
        The sidecar path.

    Raises:
        OSError: If a file cannot be written; the message names the path.
    """
    path = Path(path)
    meta = {
        "embedding_cardinalities": list(data.embedding_cardinalities),
        "num_actions": data.num_actions,
        "withheld_dims": list(data.withheld_dims),
        "config": config,
    }
    meta_file = metadata_path(path)
    try:
        dataset_frame(data).to_csv(path, index=False, float_format="%.17g")
        meta_file.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    except OSError as e:
        raise OSError(f"Could not write dataset to {path}: {e}") from e
    logger.info(f"Wrote {len(data)} records to {path}")
    return meta_file
