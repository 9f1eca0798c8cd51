"""Run configuration: a flat ``key = value`` text file plus flag overrides.

Keys are exactly the RunConfig field names. Lists are comma-separated.
``window`` is either a positive integer or the literal ``auto``, in which
case ``window_candidates`` and ``kmo_threshold`` steer the adequacy search.
Blank lines and ``#`` comments are ignored. Overrides win over file values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

DEFAULT_WINDOW_CANDIDATES = [50, 100, 150, 200, 250, 300]
DEFAULT_CUMULATIVE_THRESHOLDS = [60.0, 70.0, 80.0, 90.0]
DEFAULT_KAISER_CUTOFFS = [1.0, 0.7]

_KNOWN_KEYS = {
    "input_path",
    "returns_kind",
    "window",
    "window_candidates",
    "kmo_threshold",
    "components",
    "order_basis",
    "marker_variable",
    "cumulative_thresholds",
    "kaiser_cutoffs",
    "output_dir",
    "drop_first_window",
    "refresh_interval",
}

_REQUIRED_KEYS = ("input_path", "output_dir")


@dataclass
class RunConfig:
    input_path: str
    output_dir: str
    returns_kind: str = "log"
    window: int | str = "auto"
    window_candidates: list[int] = field(default_factory=lambda: list(DEFAULT_WINDOW_CANDIDATES))
    kmo_threshold: float = 0.5
    components: int = 10
    order_basis: str = "midpoint_sort"
    marker_variable: str = "last"
    cumulative_thresholds: list[float] = field(
        default_factory=lambda: list(DEFAULT_CUMULATIVE_THRESHOLDS)
    )
    kaiser_cutoffs: list[float] = field(default_factory=lambda: list(DEFAULT_KAISER_CUTOFFS))
    drop_first_window: bool = False
    refresh_interval: int = 256


def read_key_values(path: str | Path) -> dict[str, str]:
    """Parse the config file into raw strings; syntax errors carry line numbers."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    raw: dict[str, str] = {}
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ConfigError(f"{path}: line {line_no}: expected 'key = value', got {line!r}")
        key, _, value = text.partition("=")
        key = key.strip()
        if key in raw:
            raise ConfigError(f"{path}: line {line_no}: duplicate key {key!r}")
        raw[key] = value.strip()
    return raw


def _parse_bool(key: str, value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ConfigError(f"{key} must be a boolean, got {value!r}")


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {value!r}") from None


def _parse_list(key: str, value: str, conv) -> list:
    items = [item.strip() for item in value.split(",") if item.strip()]
    if not items:
        raise ConfigError(f"{key} must be a non-empty comma-separated list, got {value!r}")
    return [conv(key, item) for item in items]


def build_config(raw: dict[str, str]) -> RunConfig:
    """Typed RunConfig from raw strings; raises ConfigError on the first
    structural problem (unknown/missing keys, unparseable values)."""
    unknown = sorted(set(raw) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    missing = [key for key in _REQUIRED_KEYS if key not in raw]
    if missing:
        raise ConfigError(f"missing required config key(s): {', '.join(missing)}")

    cfg = RunConfig(input_path=raw["input_path"], output_dir=raw["output_dir"])
    if "returns_kind" in raw:
        cfg.returns_kind = raw["returns_kind"]
    if "window" in raw:
        cfg.window = raw["window"] if raw["window"] == "auto" else _parse_int("window", raw["window"])
    if "window_candidates" in raw:
        cfg.window_candidates = _parse_list("window_candidates", raw["window_candidates"], _parse_int)
    if "kmo_threshold" in raw:
        cfg.kmo_threshold = _parse_float("kmo_threshold", raw["kmo_threshold"])
    if "components" in raw:
        cfg.components = _parse_int("components", raw["components"])
    if "order_basis" in raw:
        cfg.order_basis = raw["order_basis"]
    if "marker_variable" in raw:
        cfg.marker_variable = raw["marker_variable"]
    if "cumulative_thresholds" in raw:
        cfg.cumulative_thresholds = _parse_list(
            "cumulative_thresholds", raw["cumulative_thresholds"], _parse_float
        )
    if "kaiser_cutoffs" in raw:
        cfg.kaiser_cutoffs = _parse_list("kaiser_cutoffs", raw["kaiser_cutoffs"], _parse_float)
    if "drop_first_window" in raw:
        cfg.drop_first_window = _parse_bool("drop_first_window", raw["drop_first_window"])
    if "refresh_interval" in raw:
        cfg.refresh_interval = _parse_int("refresh_interval", raw["refresh_interval"])
    return cfg


def diagnostics(cfg: RunConfig) -> list[str]:
    """Every violated invariant, as one message each; empty means valid."""
    problems: list[str] = []
    if not cfg.input_path:
        problems.append("input_path must not be empty")
    if not cfg.output_dir:
        problems.append("output_dir must not be empty")
    if cfg.returns_kind not in ("log", "simple", "none"):
        problems.append(f"returns_kind must be log, simple, or none, got {cfg.returns_kind!r}")
    if isinstance(cfg.window, int) and cfg.window < 1:
        problems.append(f"window must be >= 1, got {cfg.window}")
    if not isinstance(cfg.window, int) and cfg.window != "auto":
        problems.append(f"window must be an integer or 'auto', got {cfg.window!r}")
    if any(k < 1 for k in cfg.window_candidates):
        problems.append("window_candidates must all be >= 1")
    if sorted(cfg.window_candidates) != list(cfg.window_candidates):
        problems.append("window_candidates must be sorted ascending")
    if len(set(cfg.window_candidates)) != len(cfg.window_candidates):
        problems.append("window_candidates must not repeat")
    if not 0.0 <= cfg.kmo_threshold <= 1.0:
        problems.append(f"kmo_threshold must be in [0, 1], got {cfg.kmo_threshold}")
    if cfg.components < 1:
        problems.append("components must be >= 1")
    if cfg.order_basis not in ("midpoint_sort", "input_order"):
        problems.append(
            f"order_basis must be midpoint_sort or input_order, got {cfg.order_basis!r}"
        )
    if not cfg.marker_variable:
        problems.append("marker_variable must be a label or 'last'")
    for t in cfg.cumulative_thresholds:
        if not 0.0 < t <= 100.0:
            problems.append(f"cumulative threshold {t} out of range (0, 100]")
    for c in cfg.kaiser_cutoffs:
        if not c > 0.0:
            problems.append(f"kaiser cutoff {c} must be positive")
    if cfg.refresh_interval < 1:
        problems.append(f"refresh_interval must be >= 1, got {cfg.refresh_interval}")
    return problems


def load_config(path: str | Path, overrides: dict[str, str] | None = None) -> RunConfig:
    """File plus overrides -> validated RunConfig (raises ConfigError)."""
    raw = read_key_values(path)
    if overrides:
        for key, value in overrides.items():
            if key not in _KNOWN_KEYS:
                raise ConfigError(f"unknown override key {key!r}")
            raw[key] = value
    cfg = build_config(raw)
    problems = diagnostics(cfg)
    if problems:
        raise ConfigError("invalid configuration: " + "; ".join(problems))
    return cfg


def echo_lines(cfg: RunConfig) -> list[str]:
    """Canonical one-line-per-key rendering, for logs and reproducibility."""

    def fmt(value) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, list):
            return ", ".join(format(v, "g") if isinstance(v, float) else str(v) for v in value)
        return str(value)

    keys = [
        "input_path",
        "output_dir",
        "returns_kind",
        "window",
        "window_candidates",
        "kmo_threshold",
        "components",
        "order_basis",
        "marker_variable",
        "cumulative_thresholds",
        "kaiser_cutoffs",
        "drop_first_window",
        "refresh_interval",
    ]
    return [f"{key} = {fmt(getattr(cfg, key))}" for key in keys]
