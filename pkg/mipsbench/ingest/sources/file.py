"""
CsvFileSource: reads a logged dataset from a CSV file and its JSON sidecar.
"""

from pathlib import Path
import json
import logging

import pandas as pd

from ...core.dataset import LoggedDataset
from ...core.errors import InvalidEnvironmentError
from ..writer import metadata_path

logger = logging.getLogger(__name__)

REQUIRED_META_KEYS = ("embedding_cardinalities", "num_actions")


class CsvFileSource:
    """
    Source implementation for datasets written by ``write_dataset_csv``.

    The CSV holds the columns ``x_0..x_{d_x-1}, action, e_0..e_{d_e-1},
    reward, pscore``. The sidecar ``<stem>.meta.json`` holds
    ``embedding_cardinalities``, ``num_actions`` and ``withheld_dims`` (and,
    for synthetic data, the generating config, which is ignored here).

    Attributes:
        path: Path to the CSV file.
        meta_path: Path to the sidecar.

    Example:
        >>> source = CsvFileSource("logged.csv")
        >>> data = source.read()
    """

    def __init__(self, path: Path | str, meta_path: Path | str | None = None):
        self.path = Path(path)
        self.meta_path = Path(meta_path) if meta_path is not None else metadata_path(self.path)

    def metadata(self) -> dict:
        """
        The parsed sidecar.

        Raises:
            FileNotFoundError: If the sidecar is missing.
        """
        try:
            return json.loads(self.meta_path.read_text())
        except FileNotFoundError as e:
            raise FileNotFoundError(f"Dataset metadata not found: {self.meta_path}") from e

    def read(self) -> LoggedDataset:
        """
        Read and validate the dataset.

        Raises:
            FileNotFoundError: If the CSV or the sidecar is missing (the
                message names the path).
            InvalidEnvironmentError: If sidecar keys or columns are missing or the records
                violate the declared cardinalities.
        """
        meta = self.metadata()
        try:
            frame = pd.read_csv(self.path, float_precision="round_trip")
        except FileNotFoundError as e:
            raise FileNotFoundError(f"Dataset file not found: {self.path}") from e

        missing_keys = [k for k in REQUIRED_META_KEYS if k not in meta]
        if missing_keys:
            raise InvalidEnvironmentError(f"{self.meta_path}: missing keys {missing_keys}")
        cardinalities = tuple(int(c) for c in meta["embedding_cardinalities"])
        context_cols = sorted((c for c in frame.columns if c.startswith("x_")), key=lambda c: int(c[2:]))
        embed_cols = [f"e_{k}" for k in range(len(cardinalities))]
        missing = [c for c in ["action", "reward", "pscore", *embed_cols] if c not in frame.columns]
        if missing or not context_cols:
            raise InvalidEnvironmentError(f"{self.path}: missing columns {missing or ['x_0']}")

        data = LoggedDataset(
            context=frame[context_cols].to_numpy(dtype=float),
            action=frame["action"].to_numpy(),
            embedding=frame[embed_cols].to_numpy(),
            reward=frame["reward"].to_numpy(dtype=float),
            pscore=frame["pscore"].to_numpy(dtype=float),
            embedding_cardinalities=cardinalities,
            num_actions=int(meta["num_actions"]),
            withheld_dims=tuple(meta.get("withheld_dims", ())),
        )
        logger.info(f"Read {len(data)} records from {self.path}")
        return data
