"""EWMA control charts with long-range-dependence adjusted limits."""

from netkriging.charts.chart import chart_variance, run_chart, write_chart
from netkriging.charts.ewma import ewma_series, ewma_update, iid_ewma_variance
from netkriging.charts.hurst import estimate_hurst
from netkriging.charts.lrd import lrd_ewma_variance, spectral_constant

__all__ = [
    "chart_variance",
    "estimate_hurst",
    "ewma_series",
    "ewma_update",
    "iid_ewma_variance",
    "lrd_ewma_variance",
    "run_chart",
    "spectral_constant",
    "write_chart",
]
