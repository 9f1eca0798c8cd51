"""Calibrate the synthetic fixture generators with an independent route.

Everything here uses numpy.corrcoef and numpy.linalg.eigh only (no package
kernels), so the numbers it prints are an oracle for the fixture-based
assertions: population component directions, the angle planted between the
two regimes, and the sampling spread of per-window angles across seeds.
Run from the repository root:

    python scripts/derive_fixture_expectations.py
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pcadrift.synthetic import (  # noqa: E402
    contrast_loadings,
    one_factor_series,
    two_regime_series,
    uniform_loading,
)


def population_correlation(loadings: list[tuple[float, np.ndarray]], noise: float) -> np.ndarray:
    n = loadings[0][1].size
    cov = noise**2 * np.eye(n)
    for scale, vec in loadings:
        cov += scale**2 * np.outer(vec, vec)
    d = np.sqrt(np.diagonal(cov))
    return cov / np.outer(d, d)


def angle_deg(x: np.ndarray, y: np.ndarray) -> float:
    c = abs(float(np.dot(x, y))) / (np.linalg.norm(x) * np.linalg.norm(y))
    return math.degrees(math.acos(min(c, 1.0)))


def eigvec(r: np.ndarray, rank: int) -> np.ndarray:
    vals, vecs = np.linalg.eigh(r)
    return vecs[:, np.argsort(-vals)[rank]]


def window_angles(data: np.ndarray, k: int, rank: int) -> np.ndarray:
    """Aligned angle of each window's rank-th eigenvector to window 0's."""
    w = data.shape[0] - k + 1
    ref = None
    out = np.empty(w)
    for s in range(w):
        vec = eigvec(np.corrcoef(data[s : s + k].T), rank)
        if ref is None:
            ref = vec
        c = abs(float(np.dot(ref, vec)))
        out[s] = math.degrees(math.acos(min(c, 1.0)))
    return out


def main() -> None:
    print("== two-regime population geometry ==")
    for rot in (30.0, 90.0):
        n = 8
        a = uniform_loading(n)
        u, v = contrast_loadings(n)
        phi = math.radians(rot)
        b_post = math.cos(phi) * u + math.sin(phi) * v
        r_pre = population_correlation([(2.6, a), (1.0, u)], 0.1)
        r_post = population_correlation([(2.6, a), (1.0, b_post)], 0.1)
        pc2_pre = eigvec(r_pre, 1)
        pc2_post = eigvec(r_post, 1)
        vals = np.sort(np.linalg.eigvalsh(r_pre))[::-1]
        print(
            f"rotation {rot:5.1f} deg: population PC2 angle "
            f"{angle_deg(pc2_pre, pc2_post):7.3f} deg "
            f"(planted {rot}), PC2/loading misfit pre "
            f"{angle_deg(pc2_pre, u):.3f} deg, eigenvalues {np.round(vals, 3)}"
        )

    print("\n== two-regime sampling spread (k=400, N=8, T=2000) ==")
    for rot in (30.0, 90.0):
        plateau = []
        worst_pre = []
        for seed in range(41, 53):
            series, info = two_regime_series(rotation_deg=rot, seed=seed)
            ang = window_angles(series.data, 400, 1)
            flip_w = info["flip_at"]  # first window containing regime-2 rows
            pre = ang[: flip_w - 400]  # windows fully inside regime 1
            post = ang[flip_w + 400 :]  # windows fully inside regime 2
            plateau.append(float(np.median(post)))
            worst_pre.append(float(pre.max()))
        print(
            f"rotation {rot:5.1f}: post-flip plateau median over seeds "
            f"min {min(plateau):6.2f} max {max(plateau):6.2f}; "
            f"worst pre-flip angle max {max(worst_pre):5.2f}"
        )

    print("\n== stable one-factor (k=60, N=6, T=300) ==")
    worst = []
    for seed in range(7, 19):
        series, loading = one_factor_series(seed=seed)
        ang = window_angles(series.data, 60, 0)
        # also angle of every window's PC1 to the planted loading
        devs = [
            angle_deg(eigvec(np.corrcoef(series.data[s : s + 60].T), 0), loading)
            for s in range(0, series.data.shape[0] - 60 + 1, 10)
        ]
        worst.append((float(ang.max()), float(max(devs))))
    print(
        "max aligned angle to window 0 over seeds: "
        f"{max(w[0] for w in worst):5.2f} deg; "
        "max deviation from planted loading: "
        f"{max(w[1] for w in worst):5.2f} deg"
    )

    print("\n== unit-test instantiation: rotation 30, N=8, T=2600, k=1200 ==")
    for seed in (41, 42, 43):
        series, info = two_regime_series(length=2600, flip_at=1300, rotation_deg=30.0, seed=seed)
        ang = window_angles(series.data, 1200, 1)
        pre = ang[:100]
        post = ang[1300:]
        print(
            f"seed {seed}: pre max {pre.max():5.2f}, post median {np.median(post):6.2f}, "
            f"post spread [{post.min():6.2f}, {post.max():6.2f}]"
        )


if __name__ == "__main__":
    main()
