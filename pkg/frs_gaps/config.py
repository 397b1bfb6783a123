"""Configuration loader for frs-gaps experiments."""

import math
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

import yaml

from .errors import ConfigError

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent / "config.yaml"

CONFIG_ENV = "FRS_CONFIG"
SEED_ENV = "FRS_SEED"

KNOWN_KEYS = frozenset({
    "q", "gamma", "m", "n", "k", "delta", "r", "t1", "t2", "eps", "a", "trials",
    "seed", "mode", "preset", "corruption", "choice", "ell", "s", "alpha_samples",
    "planted", "retries",
})

RATIONAL_KEYS = frozenset({"delta", "eps"})
# Filled from derived_defaults when no layer sets them.
DERIVED_KEYS = ("r", "t1", "t2", "eps", "a")
INT_KEYS = frozenset({
    "q", "gamma", "m", "n", "k", "r", "t1", "t2", "a", "trials", "ell", "s",
    "alpha_samples", "retries",
})
CHOICES = {
    "mode": ("oracle", "decoder", "auto"),
    "corruption": ("joint-block", "per-alpha", "none"),
    "choice": ("nearest", "farthest"),
}

PRESETS: dict[str, dict[str, Any]] = {
    # Fully exhaustive. Stitching constants are scaled to q = 17; the
    # derived values would make peeling unreachable.
    "tiny": {
        "q": 17, "gamma": 3, "m": 2, "n": 4, "k": 2, "delta": Fraction(1, 4),
        "r": 3, "eps": Fraction(3, 4), "t1": 2, "t2": 4, "a": 2, "mode": "oracle",
    },
    "small": {
        "q": 8191, "gamma": None, "m": 8, "n": 32, "k": 64, "delta": Fraction(1, 2),
        "mode": "decoder", "alpha_samples": 64, "trials": 10,
    },
}

DEFAULTS: dict[str, Any] = {
    "trials": 100,
    "seed": 0,
    "mode": "auto",
    "corruption": "joint-block",
    "choice": "nearest",
    "ell": 2,
    "s": None,
    "alpha_samples": None,
    "planted": True,
    "retries": None,
}


def load_config(config_path: Path | str | None = None) -> dict[str, Any]:
    """Load a flat experiment mapping from a YAML file.

    Args:
        config_path: Path to config file. If None, uses $FRS_CONFIG, then the
            default location (which may be absent).

    Returns:
        Configuration dictionary (empty when no file applies).

    Raises:
        ConfigError: If a named file is missing, is invalid YAML, is not a
            mapping or holds unknown keys.
    """
    explicit = config_path is not None or CONFIG_ENV in os.environ
    if config_path is None:
        config_path = os.environ.get(CONFIG_ENV, DEFAULT_CONFIG_PATH)

    config_path = Path(config_path)

    if not config_path.exists():
        if explicit:
            raise ConfigError(f"Config file not found: {config_path}")
        return {}

    try:
        with open(config_path) as f:
            config = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {config_path}: {e}") from e

    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ConfigError(f"{config_path} must hold a flat mapping")
    unknown = set(config) - KNOWN_KEYS
    if unknown:
        raise ConfigError(f"Unknown config keys: {', '.join(sorted(unknown))}")
    return config


def parse_rational(value: Any, key: str = "value") -> Fraction:
    """Parse "num/den", an integer or a Fraction. Floats are rejected."""
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected a rational, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ConfigError(f"{key}: write rationals exactly, e.g. \"1/4\" instead of {value}")
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ConfigError(f"{key}: write rationals exactly, e.g. \"1/4\" instead of {text}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"{key}: cannot parse rational {text!r}") from e
    raise ConfigError(f"{key}: expected a rational, got {value!r}")


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    if key in RATIONAL_KEYS:
        return parse_rational(value, key)
    if key in INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        try:
            return int(value)
        except ValueError as e:
            raise ConfigError(f"{key}: expected an integer, got {value!r}") from e
    if key in CHOICES:
        if value not in CHOICES[key]:
            raise ConfigError(f"{key}: expected one of {CHOICES[key]}, got {value!r}")
        return value
    if key == "planted":
        if isinstance(value, str):
            return value.strip().lower() in ("1", "true", "yes", "on")
        return bool(value)
    if key == "seed":
        try:
            return int(value)
        except ValueError:
            return str(value)
    return value


def unique_radius(m: int, n: int, k: int) -> Fraction:
    """Block radius strictly below half the guaranteed minimum distance."""
    return Fraction((n - (k - 1) // m - 1) // 2, n)


def derived_defaults(settings: Mapping[str, Any]) -> dict[str, Any]:
    """Stitching constants derived from the gap η = 1 - R - δ'.

    t = ⌈32/η⌉, r = 2t, t1 = 2t, t2 = n, ε = 3/(2t), a = r²·t1. t2 is raised to t1
    when n < 2t so that t1 <= t2 still holds.
    """
    rate = Fraction(settings["k"], settings["m"] * settings["n"])
    eta = 1 - rate - settings["delta"]
    if eta <= 0:
        raise ConfigError(f"δ' = {settings['delta']} leaves no gap below 1 - R = {1 - rate}")
    t = math.ceil(32 / eta)
    r = 2 * t
    t1 = 2 * t
    return {"r": r, "t1": t1, "t2": max(settings["n"], t1), "eps": Fraction(3, 2 * t), "a": r * r * t1}


def resolve_settings(
    preset: str | None = None,
    file_config: Mapping[str, Any] | None = None,
    flags: Mapping[str, Any] | None = None,
) -> dict[str, Any]:
    """Merge preset < config file < flags, then fill defaults.

    Args:
        preset: Preset name; a `preset` key in the file or flags also counts.
        file_config: Mapping from load_config.
        flags: Explicitly given command-line values (None entries are ignored).

    Returns:
        A complete, typed settings dictionary.

    Raises:
        ConfigError: On unknown presets, bad values or missing code parameters.
    """
    file_config = dict(file_config or {})
    flags = {key: value for key, value in (flags or {}).items() if value is not None}
    preset = flags.get("preset") or file_config.get("preset") or preset
    if preset is not None and preset not in PRESETS:
        raise ConfigError(f"Unknown preset: {preset}")

    settings: dict[str, Any] = dict(DEFAULTS)
    if SEED_ENV in os.environ:
        settings["seed"] = os.environ[SEED_ENV]
    if preset is not None:
        settings.update(PRESETS[preset])
    for layer in (file_config, flags):
        for key, value in layer.items():
            if key not in KNOWN_KEYS:
                raise ConfigError(f"Unknown setting: {key}")
            settings[key] = value
    settings["preset"] = preset
    settings = {key: _coerce(key, value) for key, value in settings.items()}

    missing = [key for key in ("q", "m", "n", "k") if settings.get(key) is None]
    if missing:
        raise ConfigError(f"Missing required settings: {', '.join(missing)}")
    if settings.get("delta") is None:
        settings["delta"] = unique_radius(settings["m"], settings["n"], settings["k"])
    if not 0 <= settings["delta"] <= 1:
        raise ConfigError(f"delta must lie in [0, 1], got {settings['delta']}")
    settings.setdefault("gamma", None)

    if any(settings.get(key) is None for key in DERIVED_KEYS):
        derived = derived_defaults(settings)
        for key in DERIVED_KEYS:
            if settings.get(key) is None:
                settings[key] = derived[key]
    return settings
