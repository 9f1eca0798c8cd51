"""Command-line pipeline: ingest, window selection, sweep, retention, render.

    pcadrift run <config> [--key value ...]
    pcadrift validate <config>

Exit codes: 0 success, 1 configuration error, 2 data error, 3 numerical
error. Output trees are byte-reproducible for a given input and config
(run_log.txt, which carries timestamps, is the sole exception), regardless
of worker count or rerun.
"""

from __future__ import annotations

import argparse
import datetime
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import apply_workers, backend_name
from .adequacy import min_kmo_over_windows, select_window
from .config import RunConfig, diagnostics, echo_lines, load_config, read_key_values, build_config
from .errors import ConfigError, DataError, NumericalError, PcadriftError
from .evolution import angle_series, coefficient_track, save_sweep, sweep
from .ingest import check_full_variance, filter_complete, load_csv, to_returns
from .render import HeatmapSpec, export_angle_plot, export_scree, render_heatmap
from .retention import retention_report
from .rolling import correlation
from .eigen import decompose

INCOMPLETE_MARKER = "INCOMPLETE"


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def _write_lines(path: Path, lines: list[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _kmo_table_lines(table: dict[int, float | None]) -> list[str]:
    lines = []
    for k in sorted(table):
        value = table[k]
        rendered = "not_estimable" if value is None else format(value, ".6f")
        lines.append(f"kmo_min_{k} = {rendered}")
    return lines


def run(cfg: RunConfig) -> int:
    """Execute the full pipeline; returns the process exit code."""
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    marker = out_dir / INCOMPLETE_MARKER
    marker.write_text("run in progress\n", encoding="utf-8")

    log: list[str] = [
        f"pcadrift {__version__}",
        f"numpy {np.__version__}",
        f"backend {backend_name()}",
        f"started {_now()}",
        "config:",
        *("  " + line for line in echo_lines(cfg)),
    ]
    if backend_name() == "numba":
        import numba

        log.insert(2, f"numba {numba.__version__}")
    workers = apply_workers()
    log.append(f"workers {workers}")

    try:
        raw = load_csv(cfg.input_path)
        filtered, dropped = filter_complete(raw)
        log.append(f"loaded {raw.values.shape[0]} rows x {raw.values.shape[1]} columns")
        log.append(f"complete columns kept: {len(filtered.labels)}, dropped: {len(dropped)}")
        if dropped:
            log.append("dropped: " + ", ".join(dropped))
        series = to_returns(filtered, cfg.returns_kind)
        check_full_variance(series)
        t, n = series.data.shape

        if cfg.marker_variable == "last":
            marker_idx = n - 1
        else:
            try:
                marker_idx = series.labels.index(cfg.marker_variable)
            except ValueError:
                raise DataError(
                    f"marker_variable {cfg.marker_variable!r} is not a surviving column"
                ) from None

        if cfg.components > n:
            raise DataError(
                f"components={cfg.components} exceeds the {n} available variables"
            )

        # Window selection (adequacy search or explicit), with the KMO table
        # written either way so a failed search still explains itself.
        if cfg.window == "auto":
            result = select_window(series, list(cfg.window_candidates), cfg.kmo_threshold)
            kmo_lines = _kmo_table_lines(result.per_window_min_kmo)
            if result.chosen_window is None:
                _write_lines(
                    out_dir / "manifest.txt",
                    ["window_source = auto", "chosen_window = none", *kmo_lines],
                )
                raise NumericalError(
                    "window search failed: no candidate keeps KMO at or above "
                    f"{cfg.kmo_threshold} on every window"
                )
            window = result.chosen_window
            window_source = "auto"
        else:
            window = int(cfg.window)
            if window > t:
                raise DataError(f"window {window} exceeds series length {t}")
            kmo_lines = _kmo_table_lines({window: min_kmo_over_windows(series, window)})
            window_source = "explicit"
        log.append(f"window {window} ({window_source})")

        result = sweep(
            series,
            window,
            cfg.components,
            refresh_interval=cfg.refresh_interval,
            drop_first=cfg.drop_first_window,
        )
        w_count = result.window_plan.count
        gap_count = int((~result.valid).sum())
        log.append(f"sweep complete: {w_count} windows, {gap_count} gaps")

        # Full-period PCA feeds the retention rules.
        full_corr = correlation(series, 0, t)
        full_eig = decompose(full_corr)
        report = retention_report(
            full_eig.eigenvalues, cfg.cumulative_thresholds, cfg.kaiser_cutoffs
        )
        retention_lines = ["# component counts retained by each rule"]
        for threshold, m in report.cumulative.items():
            retention_lines.append(f"cumulative_{threshold:g} = {m}")
        for cutoff, m in report.kaiser.items():
            retention_lines.append(f"kaiser_{cutoff:g} = {m}")
        retention_lines.append(f"log_scree_omitted = {report.log_omitted}")
        _write_lines(out_dir / "retention.txt", retention_lines)
        export_scree(report, out_dir)

        for j in range(cfg.components):
            track = coefficient_track(result, j, cfg.order_basis)
            render_heatmap(HeatmapSpec(track=track), out_dir / f"heatmap_pc{j + 1:02d}.ppm")
            angles = angle_series(result, j, marker_idx)
            export_angle_plot(angles, out_dir / f"angles_pc{j + 1:02d}.csv")

        save_sweep(result, out_dir / "sweep")

        _write_lines(
            out_dir / "manifest.txt",
            [
                f"window_source = {window_source}",
                f"chosen_window = {window}",
                f"n_obs_input = {raw.values.shape[0]}",
                f"n_obs_series = {t}",
                f"n_vars = {n}",
                f"n_windows = {w_count}",
                f"n_gap_windows = {gap_count}",
                f"components = {cfg.components}",
                f"drop_first_window = {'true' if cfg.drop_first_window else 'false'}",
                f"refresh_interval = {cfg.refresh_interval}",
                f"marker_variable = {series.labels[marker_idx]}",
                *kmo_lines,
            ],
        )
    except PcadriftError as exc:
        log.append(f"failed {_now()}: {exc}")
        _write_lines(out_dir / "run_log.txt", log)
        marker.write_text(f"run failed: {exc}\n", encoding="utf-8")
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, ConfigError):
            return 1
        if isinstance(exc, DataError):
            return 2
        return 3

    log.append(f"finished {_now()}")
    _write_lines(out_dir / "run_log.txt", log)
    marker.unlink()
    return 0


def validate(config_path: str) -> int:
    """Parse and check a config without touching any data."""
    try:
        raw = read_key_values(config_path)
        cfg = build_config(raw)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    problems = diagnostics(cfg)
    for problem in problems:
        print(problem)
    if problems:
        return 1
    print("config ok")
    return 0


def _split_overrides(pairs: list[str]) -> dict[str, str]:
    overrides: dict[str, str] = {}
    if len(pairs) % 2 != 0:
        raise ConfigError("overrides must come in '--key value' pairs")
    for flag, value in zip(pairs[::2], pairs[1::2]):
        if not flag.startswith("--"):
            raise ConfigError(f"expected an override flag, got {flag!r}")
        overrides[flag[2:]] = value
    return overrides


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pcadrift",
        description=(
            "Sliding-window PCA structure tracking: coefficient heat maps, "
            "eigenvector angle drift, KMO window sizing, and retention rules."
        ),
    )
    parser.add_argument("--version", action="version", version=f"pcadrift {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser(
        "run",
        help="execute the pipeline from a config file",
        description=(
            "Any config key can be overridden with '--<key> <value>', e.g. "
            "--window 250 --components 4. Flags win over file values."
        ),
    )
    run_parser.add_argument("config", help="path to the run config file")

    val_parser = sub.add_parser("validate", help="check a config file without running")
    val_parser.add_argument("config", help="path to the run config file")

    args, extra = parser.parse_known_args(argv)
    if args.command == "validate":
        if extra:
            print(f"error: validate takes no overrides: {' '.join(extra)}", file=sys.stderr)
            return 1
        return validate(args.config)

    try:
        cfg = load_config(args.config, _split_overrides(extra))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
