"""Per-window PCA over the sliding sweep: coefficient tracks for heat maps
and eigenvector angle drift against the first window.

Components are matched across windows by eigenvalue rank only (component j
of window w is the j-th largest), so a genuine swap of structure between
ranks shows up as instability rather than being smoothed away; that
instability is exactly what the visual outputs are for. Each window's
eigenvectors carry the deterministic sign convention from ``eigen``; the
angle series additionally folds residual sign ambiguity into its aligned
variant and records where folding happened.

Windows whose correlation matrix is undefined (a column constant within the
window) are marked invalid and carried as NaN gaps, never interpolated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._backend import apply_workers, get_kernels
from .eigen import CONVERGENCE_TOL_PER_DIM, MAX_SWEEPS, EigenDecomposition, postprocess_eigh
from .errors import ConvergenceError, DataError, NumericalError
from .ingest import SeriesMatrix
from .rolling import DEFAULT_REFRESH_INTERVAL, WindowPlan, plan_windows

SWEEP_FORMAT_VERSION = 1


@dataclass(frozen=True)
class SweepResult:
    """All windows' eigenvalues plus the leading components' eigenvectors.

    ``eigenvalues`` is W x N (row w descending); ``coefficients`` is
    J x W x N (``coefficients[j, w]`` = eigenvector of rank j in window w);
    ``valid`` flags windows that produced a correlation matrix. Invalid
    windows hold NaN rows.
    """

    window_plan: WindowPlan
    eigenvalues: np.ndarray
    coefficients: np.ndarray
    valid: np.ndarray


@dataclass(frozen=True)
class CoefficientTrack:
    """One component's loadings across windows, columns permuted for display.

    ``matrix[w, p]`` is the loading of the variable shown at display row p in
    window w; ``row_order[p]`` is that variable's original index.
    """

    component_index: int
    matrix: np.ndarray
    row_order: np.ndarray
    order_basis: str


@dataclass(frozen=True)
class AngleSeries:
    """Angle between a component's eigenvector and its first-window reference.

    ``angles_raw`` applies arccos of the dot product verbatim (range [0, pi],
    so a pure sign flip reads as pi); ``angles_aligned`` folds flips into
    [0, pi/2]; ``flip_flags`` marks windows where the dot product was
    negative; ``marker_values`` carries one chosen variable's loading for
    sign-regime color coding downstream.
    """

    component_index: int
    angles_raw: np.ndarray
    angles_aligned: np.ndarray
    flip_flags: np.ndarray
    marker_values: np.ndarray


def sweep(
    series: SeriesMatrix,
    window_length: int,
    components: int,
    refresh_interval: int = DEFAULT_REFRESH_INTERVAL,
    drop_first: bool = False,
) -> SweepResult:
    """Correlation + eigendecomposition for every window of the plan.

    Runs blockwise: each refresh block's correlation matrices are built
    incrementally, then decomposed (in parallel on the numba backend; block
    boundaries and all outputs are keyed to absolute window indices, so the
    result is identical for any worker count). Raises if no window is valid
    or the eigensolver fails to converge anywhere.
    """
    t, n = series.data.shape
    if components < 1:
        raise DataError(f"component count must be >= 1, got {components}")
    if components > n:
        raise DataError(f"component count {components} exceeds variable count {n}")
    if refresh_interval < 1:
        raise DataError(f"refresh interval must be >= 1, got {refresh_interval}")
    plan = plan_windows(t, window_length, drop_first=drop_first)
    kernels = get_kernels()
    apply_workers()

    w_total = plan.count
    eigenvalues = np.full((w_total, n), np.nan)
    coefficients = np.full((components, w_total, n), np.nan)
    valid = np.zeros(w_total, dtype=np.bool_)

    block = min(refresh_interval, w_total)
    mats = np.empty((block, n, n), dtype=np.float64)
    vts = np.empty((block, n, n), dtype=np.float64)
    block_valid = np.empty(block, dtype=np.bool_)
    sweeps_used = np.empty(block, dtype=np.int64)
    offs = np.empty(block, dtype=np.float64)
    tol = CONVERGENCE_TOL_PER_DIM * n

    for w0 in range(0, w_total, refresh_interval):
        nwin = min(refresh_interval, w_total - w0)
        kernels.corr_sweep_block(
            series.data, window_length, int(plan.start_indices[w0]), nwin, mats, block_valid
        )
        # Invalid windows were filled with the identity by the kernel; they
        # decompose instantly and their results are discarded below.
        kernels.batch_jacobi(mats[:nwin], vts[:nwin], MAX_SWEEPS, tol, sweeps_used[:nwin], offs[:nwin])
        worst = float(np.max(offs[:nwin]))
        if worst >= tol:
            w_bad = w0 + int(np.argmax(offs[:nwin]))
            raise ConvergenceError(
                f"Jacobi iteration did not converge for window {w_bad}: "
                f"off-diagonal norm {worst:.3e} (tolerance {tol:.3e})",
                off_diagonal_norm=worst,
            )
        for i in range(nwin):
            if not block_valid[i]:
                continue
            w = w0 + i
            values, rows = postprocess_eigh(np.diagonal(mats[i]).copy(), vts[i])
            eigenvalues[w] = values
            coefficients[:, w, :] = rows[:components]
            valid[w] = True

    if not valid.any():
        raise NumericalError("sweep produced no valid windows (every window singular)")
    return SweepResult(
        window_plan=plan, eigenvalues=eigenvalues, coefficients=coefficients, valid=valid
    )


def decomposition_at(result: SweepResult, w: int) -> EigenDecomposition | None:
    """Leading-components view of window w, or None for a gap window."""
    if not result.valid[w]:
        return None
    return EigenDecomposition(
        eigenvalues=result.eigenvalues[w].copy(),
        eigenvectors=result.coefficients[:, w, :].T.copy(),
    )


def coefficient_track(result: SweepResult, component: int, order: str = "midpoint_sort") -> CoefficientTrack:
    """Extract one component's W x N loading matrix, display-ordered.

    ``midpoint_sort`` permutes variables by ascending loading at window
    floor(W/2) and keeps that order for the whole track (the sort point is
    arbitrary but must be fixed per heat map); ``input_order`` keeps the
    identity permutation.
    """
    _check_component(result, component)
    mat = result.coefficients[component]
    if order == "input_order":
        perm = np.arange(mat.shape[1], dtype=np.int64)
    elif order == "midpoint_sort":
        mid = mat.shape[0] // 2
        if not result.valid[mid]:
            raise NumericalError(
                f"midpoint window {mid} is a gap; cannot sort on its loadings"
            )
        perm = np.argsort(mat[mid], kind="stable").astype(np.int64)
    else:
        raise DataError(f"unknown ordering {order!r} (expected midpoint_sort or input_order)")
    return CoefficientTrack(
        component_index=component,
        matrix=mat[:, perm].copy(),
        row_order=perm,
        order_basis=order,
    )


def angle_series(
    result: SweepResult, component: int, marker_variable: int | None = None
) -> AngleSeries:
    """Angle of each window's rank-``component`` eigenvector to window 0's.

    Eigenvectors are unit vectors, so the angle is arccos of the plain dot
    product (clamped into [-1, 1]; no domain error is possible). Gap windows
    propagate as NaN. The marker variable defaults to the last variable in
    input order.
    """
    _check_component(result, component)
    n = result.coefficients.shape[2]
    if marker_variable is None:
        marker_variable = n - 1
    if not 0 <= marker_variable < n:
        raise DataError(f"marker variable index {marker_variable} out of range for N={n}")
    if not result.valid[0]:
        raise NumericalError("first window is a gap; the angle reference is undefined")
    mat = result.coefficients[component]
    reference = mat[0]
    dots = mat @ reference
    raw = np.arccos(np.clip(dots, -1.0, 1.0))
    aligned = np.minimum(raw, math.pi - raw)
    flips = dots < 0.0
    return AngleSeries(
        component_index=component,
        angles_raw=raw,
        angles_aligned=aligned,
        flip_flags=flips,
        marker_values=mat[:, marker_variable].copy(),
    )


def _check_component(result: SweepResult, component: int) -> None:
    j_max = result.coefficients.shape[0]
    if not 0 <= component < j_max:
        raise DataError(
            f"component index {component} out of range (sweep kept {j_max} components)"
        )


def save_sweep(result: SweepResult, directory: str | Path) -> None:
    """Persist a SweepResult as flat little-endian float64 matrices plus a
    text manifest (dimensions, window plan, component count, layout)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    w, n = result.eigenvalues.shape
    j = result.coefficients.shape[0]
    lines = [
        f"format_version = {SWEEP_FORMAT_VERSION}",
        f"n_windows = {w}",
        f"n_vars = {n}",
        f"components = {j}",
        f"window_length = {result.window_plan.window_length}",
        f"first_start = {int(result.window_plan.start_indices[0])}",
        "stride = 1",
        "byte_order = little",
        "dtype = float64",
        "layout = row-major",
    ]
    (directory / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (directory / "eigenvalues.f64").write_bytes(result.eigenvalues.astype("<f8").tobytes())
    for comp in range(j):
        name = f"coefficients_pc{comp + 1:02d}.f64"
        (directory / name).write_bytes(result.coefficients[comp].astype("<f8").tobytes())
    (directory / "valid.u8").write_bytes(result.valid.astype(np.uint8).tobytes())


def load_sweep(directory: str | Path) -> SweepResult:
    """Read back a directory written by save_sweep."""
    directory = Path(directory)
    manifest: dict[str, str] = {}
    for line in (directory / "manifest.txt").read_text(encoding="utf-8").splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            manifest[key.strip()] = value.strip()
    if int(manifest["format_version"]) != SWEEP_FORMAT_VERSION:
        raise DataError(f"unsupported sweep format version {manifest['format_version']}")
    w = int(manifest["n_windows"])
    n = int(manifest["n_vars"])
    j = int(manifest["components"])
    k = int(manifest["window_length"])
    first = int(manifest["first_start"])
    eigenvalues = np.frombuffer(
        (directory / "eigenvalues.f64").read_bytes(), dtype="<f8"
    ).reshape(w, n).copy()
    coefficients = np.empty((j, w, n), dtype=np.float64)
    for comp in range(j):
        name = f"coefficients_pc{comp + 1:02d}.f64"
        coefficients[comp] = np.frombuffer(
            (directory / name).read_bytes(), dtype="<f8"
        ).reshape(w, n)
    valid = np.frombuffer((directory / "valid.u8").read_bytes(), dtype=np.uint8).astype(bool)
    plan = WindowPlan(
        window_length=k,
        start_indices=np.arange(first, first + w, dtype=np.int64),
        count=w,
    )
    return SweepResult(
        window_plan=plan, eigenvalues=eigenvalues, coefficients=coefficients, valid=valid
    )
