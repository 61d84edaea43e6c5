"""key=value run configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from bhtrimer.dynrep import ClassifyThresholds, TorusGrid
from bhtrimer.errors import ConfigError, InvalidParameterError
from bhtrimer.model_core import ModelParams


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams = field(default_factory=ModelParams)
    thresholds: ClassifyThresholds = field(default_factory=ClassifyThresholds)
    resolution: int = 256
    tol: float = 1e-10
    tmax: float = 4.0  # units of T
    samples: int = 2000
    cache: str = "eigendata.bin"
    out: str = "."

    @property
    def grid(self) -> TorusGrid:
        return TorusGrid(self.resolution)


_PARAM_KEYS = {f.name: f.type for f in fields(ModelParams)}
_THRESH_KEYS = {f.name for f in fields(ClassifyThresholds)}
_INT_KEYS = {"N", "resolution", "samples"}
_STR_KEYS = {"cache", "out"}
_FLOAT_KEYS = (set(_PARAM_KEYS) - {"N"}) | _THRESH_KEYS | {"tol", "tmax"}
KNOWN_KEYS = _INT_KEYS | _STR_KEYS | _FLOAT_KEYS


def _convert(key: str, raw: str, lineno: int):
    if key in _STR_KEYS:
        if not raw:
            raise ConfigError(f"{key} must not be empty", lineno)
        return raw
    try:
        value = int(raw) if key in _INT_KEYS else float(raw)
    except ValueError:
        kind = "integer" if key in _INT_KEYS else "number"
        raise ConfigError(f"{key}: expected a {kind}, got {raw!r}", lineno) from None
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {raw!r}", lineno)
    return value


def parse_config(text: str) -> RunConfig:
    """Parse key=value lines; '#' starts a comment, blank lines are ignored."""
    values = {}
    seen_at = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {line!r}", lineno)
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in seen_at:
            raise ConfigError(f"duplicate key {key!r} (first set on line {seen_at[key]})", lineno)
        seen_at[key] = lineno
        values[key] = _convert(key, raw, lineno)
    return build_config(values, seen_at)


def build_config(values: dict, lines: dict = None) -> RunConfig:
    lines = lines or {}
    current = None
    try:
        current = "params"
        params = ModelParams(**{k: v for k, v in values.items() if k in _PARAM_KEYS})
        current = "thresholds"
        thresholds = ClassifyThresholds(**{k: v for k, v in values.items() if k in _THRESH_KEYS})
        rest = {k: v for k, v in values.items() if k not in _PARAM_KEYS and k not in _THRESH_KEYS}
        current = "run"
        TorusGrid(rest.get("resolution", 256))
        cfg = RunConfig(params=params, thresholds=thresholds, **rest)
    except InvalidParameterError as exc:
        # point at the offending line when we can tell which key it was
        line = next((lines[k] for k in lines if k in str(exc)), None)
        raise ConfigError(f"invalid {current} value: {exc}", line) from exc
    if not cfg.tol > 0:
        raise ConfigError("tol must be positive", lines.get("tol"))
    if not cfg.tmax > 0:
        raise ConfigError("tmax must be positive", lines.get("tmax"))
    if cfg.samples < 8:
        raise ConfigError("samples must be at least 8", lines.get("samples"))
    return cfg


def load_config(path) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc


def config_echo(cfg: RunConfig) -> str:
    """Fully resolved configuration in the same key=value format."""
    items = dict(cfg.params.as_dict())
    for f in fields(ClassifyThresholds):
        items[f.name] = getattr(cfg.thresholds, f.name)
    for key in ("resolution", "tol", "tmax", "samples", "cache", "out"):
        items[key] = getattr(cfg, key)
    return "".join(f"{k}={v!r}\n" if isinstance(v, float) else f"{k}={v}\n" for k, v in items.items())
