"""CSV ingestion, completeness filtering, and level-to-return conversion.

Input format is deliberately narrow: UTF-8 comma-separated text, a mandatory
header row of variable labels, ISO-8601 dates in the first column, decimal
point numerics, and an empty cell meaning "missing". Parse problems are
reported with their file line number and column label so a bad cell in a
multi-megabyte file is findable.

Missing data policy is column-drop only: a variable either has a complete
history and survives, or it is dropped and reported. No imputation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class RawSeries:
    """Observed levels with an explicit missing-value mask.

    ``values`` is T x N (rows = timestamps, columns = labels); ``mask`` is
    True where the cell was missing. Timestamps are strictly increasing
    ISO-8601 strings, carried as opaque ordered labels (no calendar math).
    """

    labels: list[str]
    timestamps: list[str]
    values: np.ndarray
    mask: np.ndarray


@dataclass(frozen=True)
class SeriesMatrix:
    """Complete, analysis-ready series: no missing entries and every column
    has nonzero sample variance over the full span."""

    labels: list[str]
    timestamps: list[str]
    data: np.ndarray


def load_csv(path: str | Path, layout: str = "wide") -> RawSeries:
    """Parse a wide CSV file of levels into a RawSeries.

    Cells are consumed in row-major order. Raises DataError, naming the file
    line and column, for: malformed dates, non-monotonic or duplicate
    timestamps, duplicate labels, ragged rows, and unparseable numerics.
    """
    if layout != "wide":
        raise DataError(f"unsupported layout {layout!r}; only 'wide' is available")
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty, expected a header row") from None
        if len(header) < 2:
            raise DataError(f"{path}: header must name a date column plus at least one variable")
        labels = [cell.strip() for cell in header[1:]]
        seen: set[str] = set()
        for col, label in enumerate(labels, start=2):
            if not label:
                raise DataError(f"{path}: header column {col} has an empty label")
            if label in seen:
                raise DataError(f"{path}: duplicate label {label!r} in header column {col}")
            seen.add(label)

        n = len(labels)
        timestamps: list[str] = []
        rows: list[list[float]] = []
        mask_rows: list[list[bool]] = []
        prev_stamp: str | None = None
        for line_no, row in enumerate(reader, start=2):
            if len(row) != n + 1:
                raise DataError(
                    f"{path}: line {line_no}: ragged row, expected {n + 1} cells, got {len(row)}"
                )
            stamp = row[0].strip()
            try:
                date.fromisoformat(stamp)
            except ValueError:
                raise DataError(
                    f"{path}: line {line_no}: malformed date {stamp!r} (expected ISO-8601)"
                ) from None
            if prev_stamp is not None and stamp <= prev_stamp:
                kind = "duplicate" if stamp == prev_stamp else "non-monotonic"
                raise DataError(f"{path}: line {line_no}: {kind} timestamp {stamp!r}")
            prev_stamp = stamp
            timestamps.append(stamp)

            vals: list[float] = []
            miss: list[bool] = []
            for j, cell in enumerate(row[1:]):
                text = cell.strip()
                if text == "":
                    vals.append(math.nan)
                    miss.append(True)
                    continue
                try:
                    value = float(text)
                except ValueError:
                    raise DataError(
                        f"{path}: line {line_no}: column {labels[j]!r}: "
                        f"unparseable numeric {cell!r}"
                    ) from None
                if not math.isfinite(value):
                    raise DataError(
                        f"{path}: line {line_no}: column {labels[j]!r}: "
                        f"non-finite value {cell!r}"
                    )
                vals.append(value)
                miss.append(False)
            rows.append(vals)
            mask_rows.append(miss)

    if not rows:
        raise DataError(f"{path}: no data rows after the header")
    values = np.array(rows, dtype=np.float64)
    mask = np.array(mask_rows, dtype=bool)
    return RawSeries(labels=labels, timestamps=timestamps, values=values, mask=mask)


def filter_complete(raw: RawSeries) -> tuple[RawSeries, list[str]]:
    """Keep only columns with no missing entries over the full span.

    Column order is preserved. Returns (filtered, dropped_labels); raises
    DataError when nothing survives. Idempotent.
    """
    complete = ~raw.mask.any(axis=0)
    if not complete.any():
        raise DataError("no complete series: every column has at least one missing value")
    kept = [lab for lab, ok in zip(raw.labels, complete) if ok]
    dropped = [lab for lab, ok in zip(raw.labels, complete) if not ok]
    filtered = RawSeries(
        labels=kept,
        timestamps=list(raw.timestamps),
        values=raw.values[:, complete].copy(),
        mask=raw.mask[:, complete].copy(),
    )
    return filtered, dropped


def to_returns(raw: RawSeries, kind: str = "log") -> SeriesMatrix:
    """Convert levels to the analysis series.

    kind='log'    ln(v[t+1] / v[t]), length T-1; levels must be positive.
    kind='simple' (v[t+1] - v[t]) / v[t], length T-1.
    kind='none'   pass levels through unchanged (e.g. temperatures), length T.

    Requires a complete RawSeries (run filter_complete first). The output is
    checked for full-span nonzero variance in every column.
    """
    if kind not in ("log", "simple", "none"):
        raise DataError(f"unknown returns kind {kind!r} (expected log, simple, or none)")
    if raw.mask.any():
        raise DataError("series has missing values; apply filter_complete before to_returns")

    if kind == "none":
        data = raw.values.copy()
        timestamps = list(raw.timestamps)
    else:
        if raw.values.shape[0] < 2:
            raise DataError("need at least two observations to form returns")
        if kind == "log":
            bad = np.argwhere(raw.values <= 0.0)
            if bad.size:
                t, j = bad[0]
                raise DataError(
                    f"log returns need positive levels: column {raw.labels[j]!r} "
                    f"is {raw.values[t, j]} at {raw.timestamps[t]}"
                )
            data = np.log(raw.values[1:] / raw.values[:-1])
        else:
            bad = np.argwhere(raw.values[:-1] == 0.0)
            if bad.size:
                t, j = bad[0]
                raise DataError(
                    f"simple returns divide by the prior level: column {raw.labels[j]!r} "
                    f"is 0 at {raw.timestamps[t]}"
                )
            data = (raw.values[1:] - raw.values[:-1]) / raw.values[:-1]
        timestamps = list(raw.timestamps[1:])

    return SeriesMatrix(labels=list(raw.labels), timestamps=timestamps, data=data)


def check_full_variance(series: SeriesMatrix) -> None:
    """Raise DataError if any column is constant over the full span.

    Kept separate from to_returns so that converting a degenerate series
    (e.g. constant levels giving all-zero returns) is still well defined;
    the pipeline enforces this before any correlation work starts.
    """
    spread = series.data.max(axis=0) - series.data.min(axis=0)
    flat = np.nonzero(spread == 0.0)[0]
    if flat.size:
        raise DataError(
            f"column {series.labels[int(flat[0])]!r} has zero variance over the full span"
        )
