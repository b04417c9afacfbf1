"""
Reader module for loading logged datasets from various sources.
"""

from pathlib import Path

from ..core.dataset import LoggedDataset
from .sources.file import CsvFileSource
from .sources.source import DatasetSource


class DatasetReader:
    """
    Facade over a DatasetSource.

    Attributes:
        source: The DatasetSource used to read the data.

    Example:
        >>> data = DatasetReader.from_file("logged.csv").read()
    """

    def __init__(self, source: DatasetSource):
        self.source = source

    def read(self) -> LoggedDataset:
        """Delegate to the source's ``read``."""
        return self.source.read()

    @classmethod
    def from_file(cls, path: Path | str) -> "DatasetReader":
        """
        Create a reader for a CSV dataset; the sidecar is looked up next to it.

        Raises:
            FileNotFoundError: On ``read()``, if either file is missing.
        """
        return cls(CsvFileSource(path))
