"""Classical component-retention rules: cumulative variance, Kaiser's rule,
and scree / log-eigenvalue plot data.

The scree elbow itself is a judgment call made by whoever reads the plot, so
no automatic elbow detector lives here; these functions only produce the
numbers and plot-ready points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

LOG_EIGENVALUE_FLOOR = 1e-12


@dataclass(frozen=True)
class RetentionReport:
    cumulative: dict[float, int]
    kaiser: dict[float, int]
    scree_points: list[tuple[int, float]]
    log_scree_points: list[tuple[int, float]]
    log_omitted: int


def _check_eigenvalues(eigenvalues: np.ndarray) -> np.ndarray:
    values = np.asarray(eigenvalues, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise NumericalError("eigenvalues must be a non-empty 1-D sequence")
    if np.any(values < 0.0):
        raise NumericalError("eigenvalues must be nonnegative")
    if np.any(np.diff(values) > 0.0):
        raise NumericalError("eigenvalues must be sorted descending")
    return values


def cumulative_variance(eigenvalues: np.ndarray, threshold_pct: float) -> int:
    """Smallest m whose cumulative explained percentage strictly exceeds the
    cutoff: min m with 100 * sum(l_1..l_m) / sum(l) > t*.

    The inequality is strict. For t* = 100 no m qualifies and all N
    components are returned.
    """
    values = _check_eigenvalues(eigenvalues)
    if not 0.0 < threshold_pct <= 100.0:
        raise NumericalError(f"threshold must be in (0, 100], got {threshold_pct}")
    total = float(values.sum())
    if total == 0.0:
        raise NumericalError("all eigenvalues are zero")
    running = 100.0 * np.cumsum(values) / total
    above = np.nonzero(running > threshold_pct)[0]
    if above.size == 0:
        return int(values.size)
    return int(above[0]) + 1


def kaiser_rule(eigenvalues: np.ndarray, cutoff: float = 1.0, mode: str = "correlation") -> int:
    """Count of components retained under Kaiser's rule.

    mode='correlation'      count l_k > cutoff (the classic rule uses 1.0,
                            a common relaxation 0.7)
    mode='covariance_mean'  count l_k > mean(l); cutoff is ignored
    mode='covariance_07mean' count l_k > 0.7 * mean(l); cutoff is ignored
    """
    values = _check_eigenvalues(eigenvalues)
    if mode == "correlation":
        if cutoff <= 0.0:
            raise NumericalError(f"kaiser cutoff must be positive, got {cutoff}")
        bar = cutoff
    elif mode == "covariance_mean":
        bar = float(values.mean())
    elif mode == "covariance_07mean":
        bar = 0.7 * float(values.mean())
    else:
        raise NumericalError(f"unknown kaiser mode {mode!r}")
    return int(np.sum(values > bar))


def scree_data(
    eigenvalues: np.ndarray,
) -> tuple[list[tuple[int, float]], list[tuple[int, float]], int]:
    """Plot data for the scree and log-eigenvalue diagrams.

    Returns (scree_points, log_scree_points, omitted) where points pair the
    1-based component rank with l_k (or ln l_k). Eigenvalues at or below
    1e-12 are left out of the log points and counted in ``omitted`` instead
    of being clamped.
    """
    values = _check_eigenvalues(eigenvalues)
    scree = [(int(idx) + 1, float(v)) for idx, v in enumerate(values)]
    log_scree = [
        (int(idx) + 1, float(np.log(v)))
        for idx, v in enumerate(values)
        if v > LOG_EIGENVALUE_FLOOR
    ]
    return scree, log_scree, len(scree) - len(log_scree)


def retention_report(
    eigenvalues: np.ndarray,
    cumulative_thresholds: list[float],
    kaiser_cutoffs: list[float],
) -> RetentionReport:
    """Run every rule at the requested settings and bundle the results."""
    scree, log_scree, omitted = scree_data(eigenvalues)
    return RetentionReport(
        cumulative={
            float(t): cumulative_variance(eigenvalues, t) for t in cumulative_thresholds
        },
        kaiser={float(c): kaiser_rule(eigenvalues, c) for c in kaiser_cutoffs},
        scree_points=scree,
        log_scree_points=log_scree,
        log_omitted=omitted,
    )
