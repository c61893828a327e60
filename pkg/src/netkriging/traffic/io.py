"""Trace files: a time-bin column followed by one column per series."""

from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from netkriging.core.config import settings
from netkriging.core.errors import InvalidInputError
from netkriging.models.traffic import TraceKind, TraceSet

TIME_COLUMN = "bin"


def write_traces(traces: TraceSet, path: Path, float_format: Optional[str] = None) -> Path:
    """Write ``traces`` with series as columns."""
    frame = pd.DataFrame(traces.values.T, columns=list(traces.labels))
    frame.insert(0, TIME_COLUMN, np.arange(traces.length))
    frame.to_csv(path, index=False, float_format=float_format or "%.17g")
    return path


def read_traces(
    path: Path, kind: TraceKind, bin_seconds: Optional[float] = None
) -> TraceSet:
    """
    Read a trace file written by :func:`write_traces`.

    Raises:
        InvalidInputError: Missing time column or bins out of order
    """
    frame = pd.read_csv(path, float_precision="round_trip")
    if frame.columns[0] != TIME_COLUMN:
        raise InvalidInputError(f"{path}: first column must be {TIME_COLUMN!r}", "read_traces")
    bins = frame[TIME_COLUMN].to_numpy()
    if not np.array_equal(bins, np.arange(bins.shape[0])):
        raise InvalidInputError(f"{path}: time bins must be 0, 1, 2, ...", "read_traces")
    series = frame.drop(columns=TIME_COLUMN)
    return TraceSet(
        values=series.to_numpy(dtype=np.float64).T,
        kind=kind,
        bin_seconds=bin_seconds or settings.bin_seconds,
        labels=tuple(str(c) for c in series.columns),
    )
