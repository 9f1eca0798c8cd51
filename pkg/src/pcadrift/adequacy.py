"""Kaiser-Meyer-Olkin sampling adequacy and minimal-window search.

KMO compares squared correlations with squared partial correlations:

    kmo = sum r_jk^2 / (sum r_jk^2 + sum q_jk^2)     over all j != k

where q_jk comes from the anti-image route: with C = R^-1,
q_jk = -c_jk / sqrt(c_jj c_kk). A window is "not estimable" when R is
singular or near-singular (smallest eigenvalue <= 1e-10, which necessarily
happens when the window is shorter than the variable count), or in the 0/0
identity-correlation case.

The window search scans candidate lengths ascending and picks the smallest
whose KMO is estimable on every window and never falls below the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import check_correlation_matrix
from .errors import DataError, NotEstimableError, SingularWindowError
from .ingest import SeriesMatrix
from .rolling import plan_windows, sweep_correlations

MIN_EIGENVALUE = 1e-10


@dataclass(frozen=True)
class KmoReport:
    kmo: float
    r_sq_sum: float
    q_sq_sum: float


@dataclass(frozen=True)
class WindowSearchResult:
    """Chosen window length (None when no candidate qualifies) plus the
    per-candidate minimum KMO table (None marks "not estimable")."""

    chosen_window: int | None
    per_window_min_kmo: dict[int, float | None]


def partial_correlations(matrix: np.ndarray) -> np.ndarray:
    """Anti-image partial correlation matrix with unit diagonal.

    Raises NotEstimableError when the input's smallest eigenvalue is at or
    below 1e-10. One symmetric eigenfactorization provides both the
    conditioning check and the inverse.
    """
    check_correlation_matrix(matrix)
    evals, evecs = np.linalg.eigh(matrix)
    if evals[0] <= MIN_EIGENVALUE:
        raise NotEstimableError(
            f"KMO not estimable: correlation matrix is singular "
            f"(smallest eigenvalue {evals[0]:.3e})"
        )
    inv = (evecs / evals) @ evecs.T
    scale = 1.0 / np.sqrt(np.diagonal(inv))
    q = -inv * (scale[:, None] * scale[None, :])
    q = 0.5 * (q + q.T)
    np.fill_diagonal(q, 1.0)
    return q


def kmo(matrix: np.ndarray) -> KmoReport:
    """Overall KMO statistic of a correlation matrix.

    Sums run over all ordered off-diagonal pairs (the factor of two cancels
    between numerator and denominator). Raises NotEstimableError for singular
    input and for the identity-correlation 0/0 case.
    """
    q = partial_correlations(matrix)
    n = matrix.shape[0]
    off = ~np.eye(n, dtype=bool)
    r_sq = float(np.sum(np.asarray(matrix)[off] ** 2))
    q_sq = float(np.sum(q[off] ** 2))
    if r_sq == 0.0:
        raise NotEstimableError("KMO not estimable: all off-diagonal correlations are zero")
    return KmoReport(kmo=r_sq / (r_sq + q_sq), r_sq_sum=r_sq, q_sq_sum=q_sq)


def min_kmo_over_windows(series: SeriesMatrix, window_length: int) -> float | None:
    """Minimum KMO across every window of the sweep, or None if any window
    is not estimable (singular R or zero within-window variance)."""
    plan = plan_windows(series.data.shape[0], window_length)
    worst = np.inf
    try:
        for r in sweep_correlations(series, plan):
            worst = min(worst, kmo(r).kmo)
    except (NotEstimableError, SingularWindowError):
        return None
    return float(worst)


def select_window(
    series: SeriesMatrix,
    candidates: list[int],
    threshold: float = 0.5,
) -> WindowSearchResult:
    """Smallest candidate window whose minimum windowed KMO stays at or
    above ``threshold`` and is estimable everywhere.

    Candidates must be sorted ascending and fit the series. The full table
    is always computed so a failed search still reports why.
    """
    if not candidates:
        raise DataError("empty window candidate list")
    if list(candidates) != sorted(candidates):
        raise DataError("window candidates must be sorted ascending")
    t = series.data.shape[0]
    for k in candidates:
        if k > t:
            raise DataError(f"window candidate {k} exceeds series length {t}")

    table: dict[int, float | None] = {}
    chosen: int | None = None
    for k in candidates:
        table[int(k)] = min_kmo_over_windows(series, int(k))
        if chosen is None and table[int(k)] is not None and table[int(k)] >= threshold:
            chosen = int(k)
    return WindowSearchResult(chosen_window=chosen, per_window_min_kmo=table)
