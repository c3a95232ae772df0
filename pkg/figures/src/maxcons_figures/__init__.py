"""Figure regeneration for maxcons scenario CSV artifacts (pure view layer)."""

from .io import FigureError, MissingInput, SchemaMismatch
from .plots import AXIS_SCALES, INPUT_FILES, FigureSpec, render

__version__ = "0.1.0"

__all__ = [
    "AXIS_SCALES",
    "FigureError",
    "FigureSpec",
    "INPUT_FILES",
    "MissingInput",
    "SchemaMismatch",
    "render",
]
