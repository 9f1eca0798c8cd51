"""Synthetic factor-model series with known planted structure.

These generators back the shipped fixture datasets and the tests: every
loading direction is available in closed form, so recovered components and
angles can be checked against ground truth. Marginal variances are kept
identical across variables by construction (uniform market loading,
equal-magnitude group loadings), which makes the population correlation
matrix share its eigenvectors with the covariance.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DataError
from .ingest import SeriesMatrix


def _dates(length: int) -> list[str]:
    # Consecutive days from an arbitrary epoch; downstream treats them as labels.
    base = np.datetime64("2000-01-01")
    return [str(base + np.timedelta64(i, "D")) for i in range(length)]


def _series(prefix: str, data: np.ndarray) -> SeriesMatrix:
    labels = [f"{prefix}{i + 1:02d}" for i in range(data.shape[1])]
    return SeriesMatrix(labels=labels, timestamps=_dates(data.shape[0]), data=data)


def uniform_loading(n_vars: int) -> np.ndarray:
    return np.full(n_vars, 1.0 / math.sqrt(n_vars))


def contrast_loadings(n_vars: int) -> tuple[np.ndarray, np.ndarray]:
    """Two unit +-patterns orthogonal to the uniform vector and each other.

    u splits the variables into a leading and a trailing half; v alternates.
    Requires n_vars divisible by 4.
    """
    if n_vars % 4 != 0:
        raise DataError(f"contrast loadings need n_vars divisible by 4, got {n_vars}")
    u = np.ones(n_vars)
    u[n_vars // 2 :] = -1.0
    v = np.ones(n_vars)
    v[1::2] = -1.0
    return u / math.sqrt(n_vars), v / math.sqrt(n_vars)


def one_factor_series(
    n_vars: int = 6,
    length: int = 300,
    factor_scale: float = 2.4,
    noise_scale: float = 0.2,
    seed: int = 11,
) -> tuple[SeriesMatrix, np.ndarray]:
    """Stationary single-factor series; returns (series, planted loading).

    x_t = factor_scale * f_t * a + noise_scale * eps_t with a uniform, so the
    population correlation's first eigenvector is exactly a.
    """
    rng = np.random.default_rng(seed)
    a = uniform_loading(n_vars)
    f = rng.standard_normal(length)
    eps = rng.standard_normal((length, n_vars))
    data = factor_scale * f[:, None] * a[None, :] + noise_scale * eps
    return _series("var", data), a


def two_regime_series(
    n_vars: int = 8,
    length: int = 2000,
    flip_at: int | None = None,
    rotation_deg: float = 90.0,
    market_scale: float = 3.5,
    factor_scale: float = 0.8,
    noise_scale: float = 0.1,
    seed: int = 47,
) -> tuple[SeriesMatrix, dict]:
    """Two-factor series whose second loading rotates at an observation index.

    Factor 1 (the strong, stable one) loads uniformly. Factor 2 loads on u
    before ``flip_at`` and on u rotated by ``rotation_deg`` within the (u, v)
    plane afterwards; both u and v are orthogonal to the uniform loading, so
    the rotation never leaks into the first component. Returns the series and
    a dict of the planted quantities: a, b_pre, b_post, flip_at,
    rotation_rad.
    """
    if flip_at is None:
        flip_at = length // 2
    if not 0 < flip_at < length:
        raise DataError(f"flip_at must fall inside the series, got {flip_at}")
    rng = np.random.default_rng(seed)
    a = uniform_loading(n_vars)
    u, v = contrast_loadings(n_vars)
    phi = math.radians(rotation_deg)
    b_pre = u
    b_post = math.cos(phi) * u + math.sin(phi) * v

    f1 = rng.standard_normal(length)
    f2 = rng.standard_normal(length)
    eps = rng.standard_normal((length, n_vars))
    b = np.where(np.arange(length)[:, None] < flip_at, b_pre[None, :], b_post[None, :])
    data = (
        market_scale * f1[:, None] * a[None, :]
        + factor_scale * f2[:, None] * b
        + noise_scale * eps
    )
    planted = {
        "a": a,
        "b_pre": b_pre,
        "b_post": b_post,
        "flip_at": flip_at,
        "rotation_rad": phi,
    }
    return _series("var", data), planted


def two_block_series(
    block_sizes: tuple[int, int] = (5, 4),
    length: int = 400,
    factor_scales: tuple[float, float] = (3.0, 2.0),
    noise_scale: float = 0.3,
    seed: int = 5,
) -> tuple[SeriesMatrix, np.ndarray]:
    """Two disjoint variable blocks, each driven by its own factor.

    Block strengths differ so the leading eigenvalues are well separated and
    rank-1 cleanly indicates the first block. Returns (series, block_ids)
    where block_ids[i] is 0 or 1.
    """
    n_vars = sum(block_sizes)
    rng = np.random.default_rng(seed)
    block_ids = np.repeat(np.arange(2), block_sizes)
    factors = rng.standard_normal((length, 2))
    eps = rng.standard_normal((length, n_vars))
    scales = np.asarray(factor_scales)
    data = scales[block_ids][None, :] * factors[:, block_ids] + noise_scale * eps
    return _series("var", data), block_ids


def market_panel_series(
    n_vars: int = 147,
    length: int = 3914,
    n_groups: int = 7,
    seed: int = 2015,
) -> SeriesMatrix:
    """Market-like panel at the scale of a mid-cap index study: one common
    factor plus overlapping group factors plus idiosyncratic noise. Used for
    performance runs; no planted quantity is tracked."""
    rng = np.random.default_rng(seed)
    market = rng.standard_normal(length)
    groups = rng.standard_normal((length, n_groups))
    group_of = rng.integers(0, n_groups, size=n_vars)
    beta_m = rng.uniform(0.7, 1.3, size=n_vars)
    beta_g = rng.uniform(0.4, 0.9, size=n_vars)
    eps = rng.standard_normal((length, n_vars))
    data = (
        market[:, None] * beta_m[None, :]
        + groups[:, group_of] * beta_g[None, :]
        + 0.8 * eps
    )
    # Scaled to daily-return magnitudes; irrelevant to correlations.
    return _series("stk", 0.01 * data)
