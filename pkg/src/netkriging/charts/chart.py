"""EWMA control charts on prediction residuals."""

from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from netkriging.charts.ewma import ewma_series, iid_ewma_variance
from netkriging.charts.lrd import lrd_ewma_variance
from netkriging.core.config import settings
from netkriging.core.logging import get_logger
from netkriging.models.chart import ChartConfig, ChartResult


logger = get_logger(__name__)


def chart_variance(config: ChartConfig) -> float:
    """Stationary EWMA variance under the configured dependence assumption."""
    if config.lrd_adjusted:
        return lrd_ewma_variance(config.lam, config.sigma2, config.hurst)
    return iid_ewma_variance(config.lam, config.sigma2)


def run_chart(
    residuals: np.ndarray, config: ChartConfig, onset_marker: Optional[int] = None
) -> ChartResult:
    """
    Zero-mean EWMA chart with limits ±c·σ_Z̃.

    Args:
        residuals: Y_ℓ − Ŷ_ℓ per bin
        config: Smoothing weight, residual variance, Hurst parameter and limit multiplier
        onset_marker: Bin to mark on the chart, e.g. a known anomaly onset
    """
    statistic = ewma_series(residuals, config.lam)
    variance = chart_variance(config)
    limit = config.limit_multiplier * float(np.sqrt(variance))
    alarms = np.abs(statistic) > limit
    logger.debug(
        "chart_completed",
        bins=int(statistic.shape[0]),
        alarms=int(alarms.sum()),
        limit=limit,
        lrd_adjusted=config.lrd_adjusted,
    )
    return ChartResult(
        statistic=statistic,
        limit=limit,
        variance=variance,
        alarms=alarms,
        onset_marker=onset_marker,
    )


def write_chart(
    result: ChartResult, path: Path, start_time: int = 0, float_format: Optional[str] = None
) -> Path:
    """Write columns time, statistic, limit, alarm (0/1)."""
    frame = pd.DataFrame(
        {
            "time": np.arange(start_time, start_time + result.statistic.shape[0]),
            "statistic": result.statistic,
            "limit": result.limit,
            "alarm": result.alarms.astype(int),
        }
    )
    frame.to_csv(path, index=False, float_format=float_format or settings.report_float_format)
    return path
