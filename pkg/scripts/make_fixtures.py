"""Regenerate the shipped synthetic datasets under data/.

The CSVs are committed so the CLI examples and tests run without a
generation step; this script exists to document exactly how they were made
and to rebuild them if the generators change. Values are written with repr
(shortest round-trip) so reading the CSV reproduces the arrays bit-for-bit.

    python scripts/make_fixtures.py
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pcadrift.ingest import SeriesMatrix  # noqa: E402
from pcadrift.synthetic import one_factor_series, two_regime_series  # noqa: E402

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


def write_series(series: SeriesMatrix, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *series.labels])
        for stamp, row in zip(series.timestamps, series.data):
            writer.writerow([stamp, *[repr(float(v)) for v in row]])
    print(f"wrote {path} ({series.data.shape[0]} x {series.data.shape[1]})")


def main() -> None:
    DATA_DIR.mkdir(exist_ok=True)
    stable, _ = one_factor_series()  # N=6, T=300, seed 11
    write_series(stable, DATA_DIR / "stable_one_factor.csv")
    regime, _ = two_regime_series()  # N=8, T=2000, 90 deg flip at 1000, seed 47
    write_series(regime, DATA_DIR / "two_regime.csv")


if __name__ == "__main__":
    main()
