"""
Console formatting of reports.
"""

from .console import Console

__all__ = ["Console"]
