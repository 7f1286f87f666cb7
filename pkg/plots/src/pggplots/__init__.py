"""Deterministic figure generation for pggdyn simulation outputs."""

from .csvio import SchemaError, read_columns
from .figures import KINDS, FigureSpec, render

__version__ = "0.1.0"
