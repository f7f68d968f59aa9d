"""plotkit: static figures from unitomo experiment output files."""

from .core import (
    InsufficientPointsError,
    MissingColumnError,
    PlotSpec,
    fit_loglog_slope,
    load_results,
    plot_scaling,
    plot_success_heatmap,
)

__version__ = "0.1.0"
