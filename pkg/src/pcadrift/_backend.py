"""Kernel backend selection.

Hot loops (Jacobi eigensolver, windowed correlation sweep) exist twice: a
numba-compiled version and a pure-numpy twin with identical arithmetic.
``PCADRIFT_BACKEND=numpy`` forces the fallback; the default is numba when it
imports. ``PCADRIFT_WORKERS`` bounds the numba thread count (clamped to the
launch-time maximum; the numpy path is single-threaded and ignores it).
"""

from __future__ import annotations

import os
import warnings

_ENV_BACKEND = "PCADRIFT_BACKEND"
_ENV_WORKERS = "PCADRIFT_WORKERS"

_numba_checked = False
_numba_ok = False
_max_threads = 1


def _probe_numba() -> bool:
    global _numba_checked, _numba_ok, _max_threads
    if not _numba_checked:
        try:
            import numba

            _max_threads = numba.get_num_threads()
            _numba_ok = True
        except ImportError:
            _numba_ok = False
        _numba_checked = True
    return _numba_ok


def backend_name() -> str:
    """Active backend, re-read from the environment on every call."""
    requested = os.environ.get(_ENV_BACKEND, "").strip().lower()
    if requested == "numpy":
        return "numpy"
    if requested in ("", "numba"):
        if _probe_numba():
            return "numba"
        if requested == "numba":
            warnings.warn(
                "PCADRIFT_BACKEND=numba requested but numba is not importable; "
                "falling back to the numpy kernels",
                RuntimeWarning,
                stacklevel=2,
            )
        return "numpy"
    raise ValueError(f"unknown {_ENV_BACKEND} value {requested!r} (use 'numba' or 'numpy')")


def get_kernels():
    """Return the active kernel module (lazy import keeps numpy-only runs numba-free)."""
    if backend_name() == "numba":
        from . import _kernels_numba

        return _kernels_numba
    from . import _kernels_numpy

    return _kernels_numpy


def requested_workers() -> int | None:
    raw = os.environ.get(_ENV_WORKERS, "").strip()
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{_ENV_WORKERS} must be an integer, got {raw!r}")
    if n < 1:
        raise ValueError(f"{_ENV_WORKERS} must be >= 1, got {n}")
    return n


def apply_workers() -> int:
    """Install the requested worker count; returns the effective one."""
    if backend_name() != "numba":
        return 1
    import numba

    n = requested_workers()
    if n is None:
        return numba.get_num_threads()
    effective = min(n, _max_threads)
    numba.set_num_threads(effective)
    return effective
