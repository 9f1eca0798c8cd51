"""numba-compiled hot kernels.

Arithmetic here is mirrored operation-for-operation in ``_kernels_numpy`` so
the two backends produce bit-identical results: no fastmath, float64 only,
and reductions run in the same order. Keep the twins in sync when editing.
"""

import numpy as np
from numba import njit, prange

NAME = "numba"

# Relative floor below which a window column counts as constant (no variance).
VAR_REL_TOL = 1e-13


@njit(cache=True)
def jacobi_cycle(a, vt, max_sweeps, tol):
    """Cyclic Jacobi diagonalization of symmetric ``a``, in place.

    On return the diagonal of ``a`` holds eigenvalues and row j of ``vt`` is
    the matching eigenvector. Returns (sweeps_used, off_diagonal_norm); the
    caller decides whether ``off >= tol`` is an error.
    """
    n = a.shape[0]
    for i in range(n):
        for j in range(n):
            vt[i, j] = 1.0 if i == j else 0.0
    sweeps = 0
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        off = np.sqrt(off)
        if off < tol:
            return sweeps, off
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # Rotate rows p and q (contiguous), mirror into the columns,
                # then patch the 2x2 pivot block exactly.
                for r in range(n):
                    arp = a[p, r]
                    arq = a[q, r]
                    a[p, r] = c * arp - s * arq
                    a[q, r] = s * arp + c * arq
                for r in range(n):
                    a[r, p] = a[p, r]
                    a[r, q] = a[q, r]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for r in range(n):
                    vrp = vt[p, r]
                    vrq = vt[q, r]
                    vt[p, r] = c * vrp - s * vrq
                    vt[q, r] = s * vrp + c * vrq
        sweeps += 1
    off = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            off += 2.0 * a[p, q] * a[p, q]
    off = np.sqrt(off)
    return sweeps, off


@njit(cache=True, parallel=True)
def batch_jacobi(mats, vts, max_sweeps, tol, sweeps_out, offs_out):
    """Diagonalize a batch of symmetric matrices, one prange task per matrix.

    Every matrix is independent and writes only its own slice, so results do
    not depend on the thread count.
    """
    m = mats.shape[0]
    for i in prange(m):
        sweeps, off = jacobi_cycle(mats[i], vts[i], max_sweeps, tol)
        sweeps_out[i] = sweeps
        offs_out[i] = off


@njit(cache=True)
def _moments_init(x, start, k, mu, d, m2, q):
    """Centered two-pass moments of window [start, start+k)."""
    n = x.shape[1]
    for i in range(n):
        acc = 0.0
        for t in range(start, start + k):
            acc += x[t, i]
        mu[i] = acc / k
    for i in range(n):
        accd = 0.0
        acc2 = 0.0
        for t in range(start, start + k):
            accd += x[t, i] - mu[i]
            acc2 += x[t, i] * x[t, i]
        d[i] = accd
        m2[i] = acc2
    for i in range(n):
        for j in range(n):
            q[i, j] = 0.0
    for t in range(start, start + k):
        for i in range(n):
            di = x[t, i] - mu[i]
            for j in range(n):
                q[i, j] += di * (x[t, j] - mu[j])


@njit(cache=True)
def _moments_advance(x, t_out, t_in, mu, d, m2, q):
    """Slide the window one step: drop row t_out, take row t_in."""
    n = x.shape[1]
    for i in range(n):
        d[i] += (x[t_in, i] - mu[i]) - (x[t_out, i] - mu[i])
        m2[i] += x[t_in, i] * x[t_in, i] - x[t_out, i] * x[t_out, i]
    for i in range(n):
        din_i = x[t_in, i] - mu[i]
        dout_i = x[t_out, i] - mu[i]
        for j in range(n):
            q[i, j] += din_i * (x[t_in, j] - mu[j]) - dout_i * (x[t_out, j] - mu[j])


@njit(cache=True)
def _corr_from_moments(k, d, m2, q, out):
    """Correlation matrix from windowed moments; False when a column is constant."""
    n = d.shape[0]
    ok = True
    for i in range(n):
        var = q[i, i] - d[i] * d[i] / k
        if not (var > VAR_REL_TOL * m2[i]):
            ok = False
    if not ok:
        for i in range(n):
            for j in range(n):
                out[i, j] = 1.0 if i == j else 0.0
        return False
    rs = np.empty(n, dtype=np.float64)
    for i in range(n):
        rs[i] = 1.0 / np.sqrt(q[i, i] - d[i] * d[i] / k)
    for i in range(n):
        for j in range(n):
            out[i, j] = (q[i, j] - d[i] * d[j] / k) * (rs[i] * rs[j])
    for i in range(n):
        out[i, i] = 1.0
    return True


@njit(cache=True)
def corr_sweep_block(x, k, start0, nwin, mats, valid):
    """Correlation matrices for nwin consecutive windows starting at start0.

    The first window is computed with the centered two-pass form; later
    windows reuse the running sums (add the entering row, subtract the
    leaving one). Callers refresh by starting a new block.
    """
    n = x.shape[1]
    mu = np.empty(n, dtype=np.float64)
    d = np.empty(n, dtype=np.float64)
    m2 = np.empty(n, dtype=np.float64)
    q = np.empty((n, n), dtype=np.float64)
    _moments_init(x, start0, k, mu, d, m2, q)
    for w in range(nwin):
        valid[w] = _corr_from_moments(k, d, m2, q, mats[w])
        if w + 1 < nwin:
            _moments_advance(x, start0 + w, start0 + w + k, mu, d, m2, q)


@njit(cache=True)
def naive_corr_block(x, k, starts, mats, valid):
    """Reference path: full two-pass Pearson recomputation for every window."""
    n = x.shape[1]
    mu = np.empty(n, dtype=np.float64)
    d = np.empty(n, dtype=np.float64)
    m2 = np.empty(n, dtype=np.float64)
    q = np.empty((n, n), dtype=np.float64)
    for w in range(starts.shape[0]):
        _moments_init(x, starts[w], k, mu, d, m2, q)
        valid[w] = _corr_from_moments(k, d, m2, q, mats[w])
