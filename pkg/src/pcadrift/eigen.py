"""Deterministic full symmetric eigendecomposition of correlation matrices.

The solver is a cyclic Jacobi iteration (30-sweep budget, convergence when
the off-diagonal Frobenius norm drops below 1e-12 * N). Jacobi is chosen over
library eigensolvers because its result is a pure function of the input bits,
independent of thread count or BLAS build, which the sweep pipeline's
byte-reproducibility contract requires.

Output conventions:
  * eigenvalues sorted descending; ties keep the solver's order (stable sort);
  * each eigenvector's largest-magnitude entry is made positive (first index
    wins ties), so repeated decompositions of equal inputs agree exactly;
  * eigenvalue dust in [-1e-10, 0) is clamped to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import get_kernels
from .errors import ConvergenceError

MAX_SWEEPS = 30
CONVERGENCE_TOL_PER_DIM = 1e-12
EIGENVALUE_DUST = 1e-10

# CorrelationMatrix invariant tolerances.
_DIAG_TOL = 1e-12
_SYM_TOL = 1e-12
_RANGE_TOL = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (descending) and unit eigenvectors (column j pairs with
    eigenvalue j); vector entries are the per-variable component coefficients."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def check_correlation_matrix(r: np.ndarray) -> None:
    """Raise ValueError unless ``r`` is a valid correlation matrix.

    Checks: square 2-D, finite, unit diagonal within 1e-12, symmetric within
    1e-12, entries within [-1, 1] + 1e-12.
    """
    r = np.asarray(r)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"correlation matrix must be square, got shape {r.shape}")
    if not np.all(np.isfinite(r)):
        raise ValueError("correlation matrix contains non-finite entries")
    if np.max(np.abs(np.diagonal(r) - 1.0)) > _DIAG_TOL:
        raise ValueError("correlation matrix diagonal deviates from 1 by more than 1e-12")
    if np.max(np.abs(r - r.T)) > _SYM_TOL:
        raise ValueError("correlation matrix is not symmetric within 1e-12")
    if np.max(np.abs(r)) > 1.0 + _RANGE_TOL:
        raise ValueError("correlation matrix has entries outside [-1, 1] + 1e-12")


def order_descending_stable(values: np.ndarray) -> np.ndarray:
    """Indices sorting ``values`` descending, stable under ties."""
    return np.argsort(-values, kind="stable")


def canonicalize_signs(vectors_rows: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-|entry| coordinate is positive.

    Ties on |entry| resolve to the lowest index (argmax convention). The rule
    is idempotent. Rows are eigenvectors here; use on columns via transpose.
    """
    lead = np.argmax(np.abs(vectors_rows), axis=1)
    flip = vectors_rows[np.arange(vectors_rows.shape[0]), lead] < 0.0
    out = vectors_rows.copy()
    out[flip] *= -1.0
    return out


def postprocess_eigh(diag: np.ndarray, vt: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Order, clamp, and canonicalize raw Jacobi output (vt rows = vectors).

    Shared by the standalone decomposition and the sweep so both emit
    identical bytes for identical windows.
    """
    order = order_descending_stable(diag)
    values = diag[order].copy()
    values[(values < 0.0) & (values >= -EIGENVALUE_DUST)] = 0.0
    rows = canonicalize_signs(vt[order])
    np.clip(rows, -1.0, 1.0, out=rows)
    return values, rows


def decompose(matrix: np.ndarray) -> EigenDecomposition:
    """Full eigendecomposition of a correlation matrix.

    Raises ValueError on an invalid matrix and ConvergenceError (carrying the
    achieved off-diagonal norm) if 30 sweeps do not reach tolerance.
    """
    check_correlation_matrix(matrix)
    a = np.array(matrix, dtype=np.float64, copy=True)
    n = a.shape[0]
    vt = np.empty_like(a)
    kernels = get_kernels()
    sweeps, off = kernels.jacobi_cycle(a, vt, MAX_SWEEPS, CONVERGENCE_TOL_PER_DIM * n)
    if off >= CONVERGENCE_TOL_PER_DIM * n:
        raise ConvergenceError(
            f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps: "
            f"off-diagonal norm {off:.3e} (tolerance {CONVERGENCE_TOL_PER_DIM * n:.3e})",
            off_diagonal_norm=float(off),
        )
    values, rows = postprocess_eigh(np.diagonal(a).copy(), vt)
    return EigenDecomposition(eigenvalues=values, eigenvectors=rows.T.copy())


def reconstruct(decomp: EigenDecomposition) -> np.ndarray:
    """Rebuild the matrix as sum_j l_j v_j v_j^T (spectral theorem)."""
    v = decomp.eigenvectors
    return (v * decomp.eigenvalues) @ v.T
