"""
Source protocol for reading logged datasets.

Any class with a ``read()`` method returning a LoggedDataset can be used as
a DatasetSource, so the Reader works with files, in-memory fixtures or
custom loaders alike.
"""

from typing import Protocol, runtime_checkable

from ...core.dataset import LoggedDataset


@runtime_checkable
class DatasetSource(Protocol):
    """
    Protocol (interface) for logged-dataset sources.

    The protocol is runtime-checkable, so ``isinstance`` works for classes
    that implement ``read`` without inheriting from DatasetSource.

    Example:
        >>> class InMemorySource:
        ...     def __init__(self, data):
        ...         self.data = data
        ...     def read(self):
        ...         return self.data
        >>> isinstance(InMemorySource(None), DatasetSource)
        True
    """

    def read(self) -> LoggedDataset:
        """
        Read the whole dataset.

        Returns:
            The validated LoggedDataset.

        Raises:
            OSError: If the underlying storage cannot be read.
            ValueError: If the stored data is malformed.
        """
        ...
