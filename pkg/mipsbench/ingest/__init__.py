"""
Dataset import and export.

Logged datasets are stored as a headered CSV next to a JSON sidecar that
records cardinalities, the action count and the withheld dimensions.
"""

from .reader import DatasetReader
from .writer import metadata_path, write_dataset_csv

__all__ = ["DatasetReader", "metadata_path", "write_dataset_csv"]
