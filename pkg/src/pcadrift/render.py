"""File outputs: coefficient heat maps as binary PPM images, angle series
and scree data as CSV.

The heat map palette is a symmetric diverging ramp from red (negative
loadings) through an orange midpoint to yellow (positive loadings): the red
and blue channels are fixed at 255 and 0, and the green channel is
127 + rint(127 * v / clip) for the clipped loading v. rint is sign-symmetric,
so color(v) and color(-v) mirror exactly about the midpoint, channel by
channel, and the map is monotone in v. Gap windows use a reserved neutral
gray outside the ramp. One cell per (window, variable), scaled by integer
pixel sizes; images are bit-reproducible functions of the track.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .evolution import AngleSeries, CoefficientTrack
from .retention import RetentionReport

MIDPOINT_GREEN = 127
GAP_COLOR = (128, 128, 128)
DEFAULT_CLIP_PERCENTILE = 99.0


@dataclass(frozen=True)
class HeatmapSpec:
    """Rendering parameters for one coefficient track.

    ``value_clip`` defaults to the 99th percentile of |loading| over the
    track (so a single extreme window cannot flatten the contrast); the
    value actually used is recorded in the sidecar manifest.
    """

    track: CoefficientTrack
    value_clip: float | None = None
    cell_width: int = 1
    cell_height: int = 1
    color_scale: str = "symmetric_diverging"


def resolve_clip(spec: HeatmapSpec) -> float:
    if spec.value_clip is not None:
        if not spec.value_clip > 0.0:
            raise DataError(f"value_clip must be positive, got {spec.value_clip}")
        return float(spec.value_clip)
    mat = spec.track.matrix
    finite = np.abs(mat[np.isfinite(mat)])
    clip = float(np.percentile(finite, DEFAULT_CLIP_PERCENTILE)) if finite.size else 0.0
    if clip <= 0.0:
        clip = float(finite.max()) if finite.size and finite.max() > 0.0 else 1.0
    return clip


def loading_colors(values: np.ndarray, clip: float) -> np.ndarray:
    """Map loadings to RGB; NaN becomes the gap color. Shape (..., 3) uint8."""
    t = np.clip(values / clip, -1.0, 1.0)
    gap = ~np.isfinite(values)
    green = MIDPOINT_GREEN + np.rint(MIDPOINT_GREEN * np.where(gap, 0.0, t))
    rgb = np.empty(values.shape + (3,), dtype=np.uint8)
    rgb[..., 0] = 255
    rgb[..., 1] = green.astype(np.uint8)
    rgb[..., 2] = 0
    rgb[gap] = GAP_COLOR
    return rgb


def render_heatmap(spec: HeatmapSpec, out: str | Path) -> Path:
    """Write the track as a binary (P6) PPM image, one cell per
    (window, variable): windows run left to right, display rows top to
    bottom. A sidecar text manifest (same name, .txt) records the
    dimensions, clip value, and row order. Returns the image path.
    """
    if spec.color_scale != "symmetric_diverging":
        raise DataError(f"unknown color scale {spec.color_scale!r}")
    if spec.cell_width < 1 or spec.cell_height < 1:
        raise DataError("cell sizes must be >= 1 pixel")
    out = Path(out)
    clip = resolve_clip(spec)

    cells = loading_colors(spec.track.matrix.T, clip)  # (N display rows, W, 3)
    image = np.repeat(np.repeat(cells, spec.cell_height, axis=0), spec.cell_width, axis=1)
    height, width = image.shape[0], image.shape[1]

    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "wb") as fh:
        fh.write(f"P6\n{width} {height}\n255\n".encode("ascii"))
        fh.write(image.tobytes())

    sidecar = out.with_suffix(".txt")
    order = ",".join(str(int(i)) for i in spec.track.row_order)
    sidecar.write_text(
        "\n".join(
            [
                f"component = {spec.track.component_index + 1}",
                f"width = {width}",
                f"height = {height}",
                f"cell_width = {spec.cell_width}",
                f"cell_height = {spec.cell_height}",
                f"n_windows = {spec.track.matrix.shape[0]}",
                f"n_variables = {spec.track.matrix.shape[1]}",
                f"value_clip = {clip!r}",
                f"order_basis = {spec.track.order_basis}",
                f"row_order = {order}",
            ]
        )
        + "\n",
        encoding="utf-8",
    )
    return out


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else format(x, ".12g")


def export_angle_plot(series: AngleSeries, out: str | Path) -> Path:
    """Write the angle series as CSV.

    Columns: window, angle_raw_rad, angle_aligned_rad, flip_flag,
    marker_value, marker_sign_class. The sign class is 'nonpositive' for a
    marker loading <= 0 and 'positive' otherwise; gap windows leave the
    numeric fields and the class empty.
    """
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["window", "angle_raw_rad", "angle_aligned_rad", "flip_flag", "marker_value", "marker_sign_class"]
        )
        for w in range(series.angles_raw.shape[0]):
            raw = float(series.angles_raw[w])
            if math.isnan(raw):
                writer.writerow([w, "", "", "", "", ""])
                continue
            marker = float(series.marker_values[w])
            writer.writerow(
                [
                    w,
                    _fmt(raw),
                    _fmt(float(series.angles_aligned[w])),
                    "true" if bool(series.flip_flags[w]) else "false",
                    _fmt(marker),
                    "nonpositive" if marker <= 0.0 else "positive",
                ]
            )
    return out


def export_scree(report: RetentionReport, out_dir: str | Path) -> tuple[Path, Path]:
    """Write scree.csv and log_scree.csv (columns k, value) under out_dir.

    The count of eigenvalues omitted from the log plot (at or below the
    1e-12 floor) is recorded as a comment line heading log_scree.csv.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    scree_path = out_dir / "scree.csv"
    log_path = out_dir / "log_scree.csv"
    with open(scree_path, "w", newline="", encoding="utf-8") as fh:
        fh.write("k,value\n")
        for k, v in report.scree_points:
            fh.write(f"{k},{_fmt(v)}\n")
    with open(log_path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# omitted_nonpositive = {report.log_omitted}\n")
        fh.write("k,value\n")
        for k, v in report.log_scree_points:
            fh.write(f"{k},{_fmt(v)}\n")
    return scree_path, log_path
