"""Sliding-window PCA structure tracking for multivariate time series.

Sweeps a fixed-length window across a series, decomposes each window's
correlation matrix, and exposes how every principal component's coefficient
pattern and direction evolve: per-component heat-map tracks, eigenvector
angle drift against the first window, KMO-based window sizing, and the four
classical retention rules for comparison.
"""

__version__ = "0.1.0"

from .adequacy import KmoReport, WindowSearchResult, kmo, partial_correlations, select_window
from .eigen import EigenDecomposition, decompose, reconstruct
from .errors import (
    ConfigError,
    ConvergenceError,
    DataError,
    NotEstimableError,
    NumericalError,
    PcadriftError,
    SingularWindowError,
)
from .evolution import (
    AngleSeries,
    CoefficientTrack,
    SweepResult,
    angle_series,
    coefficient_track,
    load_sweep,
    save_sweep,
    sweep,
)
from .ingest import RawSeries, SeriesMatrix, filter_complete, load_csv, to_returns
from .render import HeatmapSpec, export_angle_plot, export_scree, render_heatmap
from .retention import (
    RetentionReport,
    cumulative_variance,
    kaiser_rule,
    retention_report,
    scree_data,
)
from .rolling import (
    WindowPlan,
    correlation,
    plan_windows,
    sweep_correlations,
    sweep_correlations_naive,
)

__all__ = [
    "__version__",
    "AngleSeries",
    "CoefficientTrack",
    "ConfigError",
    "ConvergenceError",
    "DataError",
    "EigenDecomposition",
    "HeatmapSpec",
    "KmoReport",
    "NotEstimableError",
    "NumericalError",
    "PcadriftError",
    "RawSeries",
    "RetentionReport",
    "SeriesMatrix",
    "SingularWindowError",
    "SweepResult",
    "WindowPlan",
    "WindowSearchResult",
    "angle_series",
    "coefficient_track",
    "correlation",
    "cumulative_variance",
    "decompose",
    "export_angle_plot",
    "export_scree",
    "filter_complete",
    "kaiser_rule",
    "kmo",
    "load_csv",
    "load_sweep",
    "partial_correlations",
    "plan_windows",
    "reconstruct",
    "render_heatmap",
    "retention_report",
    "save_sweep",
    "scree_data",
    "select_window",
    "sweep",
    "sweep_correlations",
    "sweep_correlations_naive",
    "to_returns",
]
