"""plotkit: figure rendering for fairbandits experiment CSVs."""

from .csvio import AggregateData, SchemaError, SingleRunData, panel_label
from .figures import FigureSpec, plot_aggregate, plot_single_run, render

__version__ = "0.1.0"

__all__ = [
    "AggregateData",
    "FigureSpec",
    "SchemaError",
    "SingleRunData",
    "panel_label",
    "plot_aggregate",
    "plot_single_run",
    "render",
    "__version__",
]
