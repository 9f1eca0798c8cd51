"""Pure-numpy twins of the numba kernels.

Same float64 arithmetic in the same order as ``_kernels_numba`` (verified
bit-identical by tests); only the speed differs. Used when numba is missing
or when ``PCADRIFT_BACKEND=numpy`` is set.
"""

import numpy as np

NAME = "numpy"

VAR_REL_TOL = 1e-13


def jacobi_cycle(a, vt, max_sweeps, tol):
    """Twin of the numba cyclic Jacobi; rotates whole rows with numpy ops."""
    n = a.shape[0]
    vt[:] = np.eye(n)
    sweeps = 0
    for _ in range(max_sweeps):
        tri = a[np.triu_indices(n, 1)]
        off = np.sqrt(np.sum(2.0 * tri * tri))
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
                arp = a[p, :].copy()
                arq = a[q, :].copy()
                a[p, :] = c * arp - s * arq
                a[q, :] = s * arp + c * arq
                a[:, p] = a[p, :]
                a[:, q] = a[q, :]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vrp = vt[p, :].copy()
                vrq = vt[q, :].copy()
                vt[p, :] = c * vrp - s * vrq
                vt[q, :] = s * vrp + c * vrq
        sweeps += 1
    tri = a[np.triu_indices(n, 1)]
    off = np.sqrt(np.sum(2.0 * tri * tri))
    return sweeps, off


def batch_jacobi(mats, vts, max_sweeps, tol, sweeps_out, offs_out):
    for i in range(mats.shape[0]):
        sweeps, off = jacobi_cycle(mats[i], vts[i], max_sweeps, tol)
        sweeps_out[i] = sweeps
        offs_out[i] = off


def _moments_init(x, start, k, mu, d, m2, q):
    # Row-sequential accumulation keeps the summation order of the numba twin.
    acc = np.zeros(x.shape[1])
    for t in range(start, start + k):
        acc += x[t]
    mu[:] = acc / k
    accd = np.zeros(x.shape[1])
    acc2 = np.zeros(x.shape[1])
    for t in range(start, start + k):
        accd += x[t] - mu
        acc2 += x[t] * x[t]
    d[:] = accd
    m2[:] = acc2
    q[:] = 0.0
    for t in range(start, start + k):
        dev = x[t] - mu
        q += dev[:, None] * dev[None, :]


def _moments_advance(x, t_out, t_in, mu, d, m2, q):
    d += (x[t_in] - mu) - (x[t_out] - mu)
    m2 += x[t_in] * x[t_in] - x[t_out] * x[t_out]
    din = x[t_in] - mu
    dout = x[t_out] - mu
    q += din[:, None] * din[None, :] - dout[:, None] * dout[None, :]


def _corr_from_moments(k, d, m2, q, out):
    var = np.diagonal(q) - d * d / k
    if not np.all(var > VAR_REL_TOL * m2):
        out[:] = np.eye(d.shape[0])
        return False
    rs = 1.0 / np.sqrt(var)
    out[:] = (q - (d[:, None] * d[None, :]) / k) * (rs[:, None] * rs[None, :])
    np.fill_diagonal(out, 1.0)
    return True


def corr_sweep_block(x, k, start0, nwin, mats, valid):
    n = x.shape[1]
    mu = np.empty(n)
    d = np.empty(n)
    m2 = np.empty(n)
    q = np.empty((n, n))
    _moments_init(x, start0, k, mu, d, m2, q)
    for w in range(nwin):
        valid[w] = _corr_from_moments(k, d, m2, q, mats[w])
        if w + 1 < nwin:
            _moments_advance(x, start0 + w, start0 + w + k, mu, d, m2, q)


def naive_corr_block(x, k, starts, mats, valid):
    """Per-window two-pass recomputation, vectorized the idiomatic numpy way."""
    for w, start in enumerate(starts):
        xw = x[start : start + k]
        mu = xw.mean(axis=0)
        xc = xw - mu
        q = xc.T @ xc
        d = xc.sum(axis=0)
        m2 = (xw * xw).sum(axis=0)
        valid[w] = _corr_from_moments(k, d, m2, q, mats[w])
