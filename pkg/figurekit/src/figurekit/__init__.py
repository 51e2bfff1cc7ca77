"""Deterministic figures from gaugemem run artifacts."""

from .figures import render
from .spec import FIGURE_KINDS, FigureSpec, SchemaError, load_inputs

__version__ = "0.1.0"

__all__ = [
    "FIGURE_KINDS",
    "FigureSpec",
    "SchemaError",
    "load_inputs",
    "render",
    "__version__",
]
