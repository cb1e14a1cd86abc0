"""Configuration management service."""

import copy
import os
from pathlib import Path
from typing import Any, Optional

from projlab.errors import ConfigError


# Default configuration
DEFAULT_CONFIG = {
    "run": {
        "seed": 20240601,
        "samples": 200000,
        "workers": 1,
        "format": "json",
        "tol": 1e-9
    },
    "enumeration": {
        "cap": 10_000_000
    },
    "optimizer": {
        "restarts": 32,
        "max_iter": 2000,
        "grad_tol": 1e-10,
        "grid_resolution": 12
    },
    "quadrature": {
        "abs_tol": 1e-12,
        "rel_tol": 1e-10,
        "limit": 200
    },
    "boolean": {
        "exact_cap": 26
    },
    "log": {
        "timezone": "UTC",
        "file": "",
        "max_file_size": 5 * 1024 * 1024
    }
}

WORKERS_ENV = "PROJLAB_WORKERS"


def get_config_path() -> Path:
    """Get the path to the default config file."""
    base_dir = Path(__file__).parent.parent.parent
    return base_dir / "config" / "settings.conf"


def _coerce(raw: str) -> Any:
    """Turn a config value string into int, float, bool or str."""
    text = raw.strip()
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    lowered = text.lower()
    if lowered in ("true", "yes", "on"):
        return True
    if lowered in ("false", "no", "off"):
        return False
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def parse_config_text(text: str, source: str = "<string>") -> dict:
    """Parse flat key=value lines into a nested dict.

    Dotted keys address sections (``optimizer.restarts = 16``); bare keys
    belong to the ``run`` section.
    """
    parsed: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value, got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        parts = key.split(".") if "." in key else ["run", key]
        node = parsed
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"{source}:{lineno}: {key} shadows a value")
        node[parts[-1].replace("-", "_")] = _coerce(value)
    return parsed


def load_config(path: Optional[Path] = None) -> dict:
    """Load configuration, merging the file over the defaults.

    An explicit path must exist; the default path is optional.
    """
    merged = copy.deepcopy(DEFAULT_CONFIG)
    explicit = path is not None
    config_path = Path(path) if explicit else get_config_path()

    if not config_path.exists():
        if explicit:
            raise ConfigError(f"config file not found: {config_path}")
    else:
        try:
            text = config_path.read_text()
        except OSError as e:
            raise ConfigError(f"error loading config {config_path}: {e}") from e
        _deep_merge(merged, parse_config_text(text, str(config_path)))

    _apply_env(merged)
    _validate(merged)
    return merged


def apply_overrides(config: dict, overrides: dict) -> dict:
    """Apply dotted-key overrides (from command-line flags) on a copy."""
    result = copy.deepcopy(config)
    for key, value in overrides.items():
        if value is None:
            continue
        parts = key.split(".") if "." in key else ["run", key]
        node = result
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    _validate(result)
    return result


def dump_config(config: dict) -> str:
    """Render a nested config back to key=value text."""
    lines = []
    for section in sorted(config):
        values = config[section]
        if not isinstance(values, dict):
            lines.append(f"{section} = {values}")
            continue
        for key in sorted(values):
            lines.append(f"{section}.{key} = {values[key]}")
    return "\n".join(lines) + "\n"


def _apply_env(config: dict) -> None:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None or not raw.strip():
        return
    try:
        config["run"]["workers"] = int(raw)
    except ValueError as e:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from e


def _check_types(config: dict) -> None:
    """Every key known to DEFAULT_CONFIG keeps the kind of its default."""
    for section, defaults in DEFAULT_CONFIG.items():
        values = config.get(section)
        if not isinstance(values, dict):
            raise ConfigError(f"{section} must be a section, got {values!r}")
        for key, default in defaults.items():
            value = values.get(key)
            if isinstance(default, int):
                ok = isinstance(value, int) and not isinstance(value, bool)
                kind = "an integer"
            elif isinstance(default, float):
                ok = isinstance(value, (int, float)) and not isinstance(value, bool)
                kind = "a number"
            else:
                ok = isinstance(value, str)
                kind = "a string"
            if not ok:
                raise ConfigError(f"{section}.{key} must be {kind}, got {value!r}")


def _validate(config: dict) -> None:
    _check_types(config)
    run = config["run"]
    if run["workers"] < 1:
        raise ConfigError(f"run.workers must be an integer >= 1, got {run['workers']!r}")
    if run["samples"] < 1:
        raise ConfigError(f"run.samples must be an integer >= 1, got {run['samples']!r}")
    if run["seed"] < 0:
        raise ConfigError(f"run.seed must be a nonnegative integer, got {run['seed']!r}")
    if run["format"] not in ("json", "csv", "text"):
        raise ConfigError(f"run.format must be json, csv or text, got {run['format']!r}")
    if not run["tol"] > 0:
        raise ConfigError("run.tol must be positive")
    if config["enumeration"]["cap"] < 1:
        raise ConfigError("enumeration.cap must be positive")
    for key in ("abs_tol", "rel_tol"):
        if not config["quadrature"][key] > 0:
            raise ConfigError(f"quadrature.{key} must be positive")
    if config["quadrature"]["limit"] < 1:
        raise ConfigError("quadrature.limit must be positive")
    for key in ("restarts", "max_iter", "grid_resolution"):
        if config["optimizer"][key] < 1:
            raise ConfigError(f"optimizer.{key} must be positive")
    if config["boolean"]["exact_cap"] < 1:
        raise ConfigError("boolean.exact_cap must be positive")
    if config["log"]["max_file_size"] < 1:
        raise ConfigError("log.max_file_size must be positive")


def _deep_merge(base: dict, override: dict) -> None:
    """Deep merge override into base dict."""
    for key, value in override.items():
        if key in base and isinstance(base[key], dict) and isinstance(value, dict):
            _deep_merge(base[key], value)
        else:
            base[key] = value
