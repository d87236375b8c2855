"""Figure rendering for experiment CSV bundles written by the test harness."""

from .render import FIGURE_KINDS, FigureSpec, SchemaError, render

__all__ = ["FIGURE_KINDS", "FigureSpec", "SchemaError", "render"]
__version__ = "0.1.0"
