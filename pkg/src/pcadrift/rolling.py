"""Sliding-window Pearson correlation matrices.

The sweep keeps running first and second moments and updates them per step
(add the entering row, subtract the leaving one), so advancing the window
costs O(N^2) instead of O(k N^2). Running sums are recomputed from scratch
with the centered two-pass form every ``refresh_interval`` windows to bound
floating-point drift; the refresh schedule is keyed to the absolute window
index, so partitioning the sweep does not change any output bit.

A naive per-window recomputation path is kept alongside as the reference
implementation and benchmark baseline.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._backend import get_kernels
from .errors import DataError, SingularWindowError
from .ingest import SeriesMatrix

DEFAULT_REFRESH_INTERVAL = 256


@dataclass(frozen=True)
class WindowPlan:
    """Stride-1 window layout: ``count`` windows of ``window_length`` rows."""

    window_length: int
    start_indices: np.ndarray
    count: int


def plan_windows(series_length: int, window_length: int, drop_first: bool = False) -> WindowPlan:
    """Plan every stride-1 window of length k over a series of length T.

    Yields T - k + 1 windows starting at 0, 1, ..., T - k. With
    ``drop_first=True`` the window starting at 0 is omitted (compatibility
    with sources that count T - k windows), leaving the one starting at 1 as
    the first, which downstream angle series then use as their reference.
    """
    if window_length < 1:
        raise DataError(f"window length must be >= 1, got {window_length}")
    if window_length > series_length:
        raise DataError(
            f"window exceeds series length: k={window_length} > T={series_length}"
        )
    first = 1 if drop_first else 0
    starts = np.arange(first, series_length - window_length + 1, dtype=np.int64)
    if starts.size == 0:
        raise DataError("drop_first_window removed the only window (k == T)")
    return WindowPlan(window_length=window_length, start_indices=starts, count=int(starts.size))


def _check_plan(series: SeriesMatrix, plan: WindowPlan) -> None:
    t = series.data.shape[0]
    if plan.count != plan.start_indices.size:
        raise DataError("window plan count disagrees with its start indices")
    if plan.start_indices[-1] + plan.window_length > t:
        raise DataError("window plan extends past the end of the series")


def _raise_singular(series: SeriesMatrix, start: int, k: int) -> None:
    x = series.data[start : start + k]
    spread = x.max(axis=0) - x.min(axis=0)
    flat = np.nonzero(spread == 0.0)[0]
    j = int(flat[0]) if flat.size else int(np.argmin(spread))
    raise SingularWindowError(
        f"column {series.labels[j]!r} has zero variance in window "
        f"[{start}, {start + k})"
    )


def correlation(series: SeriesMatrix, start: int, k: int) -> np.ndarray:
    """Pearson correlation matrix of rows [start, start+k), two-pass form.

    The diagonal is exactly 1. Raises SingularWindowError, naming the
    variable and window, when a column is constant within the window.
    """
    t, n = series.data.shape
    if start < 0 or k < 1 or start + k > t:
        raise DataError(f"window [{start}, {start + k}) is out of range for T={t}")
    kernels = get_kernels()
    mats = np.empty((1, n, n), dtype=np.float64)
    valid = np.empty(1, dtype=np.bool_)
    kernels.naive_corr_block(
        series.data, k, np.array([start], dtype=np.int64), mats, valid
    )
    if not valid[0]:
        _raise_singular(series, start, k)
    return mats[0]


def sweep_correlations(
    series: SeriesMatrix,
    plan: WindowPlan,
    refresh_interval: int = DEFAULT_REFRESH_INTERVAL,
) -> Iterator[np.ndarray]:
    """Yield one correlation matrix per window, ascending window index.

    Incremental moment updates with a full two-pass refresh at every window
    whose index is a multiple of ``refresh_interval``. Matrices are yielded
    as fresh arrays; at large scale consume the stream instead of listing it
    (W matrices of N x N float64 add up).
    """
    if refresh_interval < 1:
        raise DataError(f"refresh interval must be >= 1, got {refresh_interval}")
    _check_plan(series, plan)
    kernels = get_kernels()
    n = series.data.shape[1]
    k = plan.window_length
    block = min(refresh_interval, plan.count)
    mats = np.empty((block, n, n), dtype=np.float64)
    valid = np.empty(block, dtype=np.bool_)
    for w0 in range(0, plan.count, refresh_interval):
        nwin = min(refresh_interval, plan.count - w0)
        kernels.corr_sweep_block(
            series.data, k, int(plan.start_indices[w0]), nwin, mats, valid
        )
        for i in range(nwin):
            if not valid[i]:
                _raise_singular(series, int(plan.start_indices[w0 + i]), k)
            yield mats[i].copy()


def sweep_correlations_naive(series: SeriesMatrix, plan: WindowPlan) -> Iterator[np.ndarray]:
    """Reference sweep: recompute every window from scratch (O(k N^2) each)."""
    _check_plan(series, plan)
    kernels = get_kernels()
    n = series.data.shape[1]
    k = plan.window_length
    chunk = 256
    mats = np.empty((min(chunk, plan.count), n, n), dtype=np.float64)
    valid = np.empty(min(chunk, plan.count), dtype=np.bool_)
    for w0 in range(0, plan.count, chunk):
        starts = plan.start_indices[w0 : w0 + chunk]
        kernels.naive_corr_block(series.data, k, starts, mats, valid)
        for i in range(starts.size):
            if not valid[i]:
                _raise_singular(series, int(starts[i]), k)
            yield mats[i].copy()
