"""
Sources are classes that read a stored logged dataset and return a LoggedDataset.

CsvFileSource: reads a CSV file plus its .meta.json sidecar
"""

from .file import CsvFileSource
from .source import DatasetSource

__all__ = ["CsvFileSource", "DatasetSource"]
