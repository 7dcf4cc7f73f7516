"""Suite configuration: a TOML file with one table per parameter block.

Every key has a default, so an empty file is a valid configuration.  Unknown
keys and wrongly typed values raise ConfigError.

Example::

    seed = 7
    tolerance_scale = 1.0

    [cocycle]
    A = "scalar:0.5"
    xi = "indicator:0.5"

    [twisted]
    lambda = [1.0, 2.0]
    mu = [1.0, 1.0]
    expect_unit = false
"""

from __future__ import annotations

import copy
import sys
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError

SUITES = ("cone", "weyl", "elog", "reconstruct", "cocycle", "units", "prime")
ALL_SUITES = SUITES + ("all",)

_NUM = (int, float)
_LIST = list

# key -> (accepted types, default); nested dicts are tables
SCHEMA: dict[str, Any] = {
    "suite": (str, None),
    "seed": (int, 0),
    "tolerance_scale": (_NUM, 1.0),
    "tolerances": {},  # free-form: check name -> tolerance
    "cone": {
        "count": (int, 5),
        "dims": (_LIST, [2, 3]),
        "sequence_length": (int, 12),
    },
    "weyl": {
        "modes": (int, 2),
        "cutoff": (int, 20),
        "samples": (int, 10),
        "radius": (_NUM, 1.0),
    },
    "elog": {
        "eps": (_NUM, 1.0 / 64),
        "partitions": (_LIST, [4, 16, 64]),
        "gram_samples": (int, 20),
    },
    "module": {
        "eps": (_NUM, 1.0),
        "multiplicity": (int, 1),
    },
    "cocycle": {
        "lambda": (_LIST, None),
        "A": (str, "scalar:0.5"),
        "xi": (str, "indicator:0.5"),
        "eps": (_NUM, 0.5),
        "mode": (str, "contractive"),
        "cutoff": (int, 16),
    },
    "twisted": {
        "lambda": (_LIST, [1.0, 2.0]),
        "mu": (_LIST, [1.0, 1.0]),
        "samples": (_LIST, [[[1.0, 0.0], [1.0, 0.0]], [[0.0, 1.0], [1.0, 0.0]], [[1.0, 1.0], [0.0, 1.0]]]),
        "expect_unit": (bool, None),
        "alpha_points": (int, 61),
        "beta_points": (int, 13),
    },
    "prime": {
        "window": (int, 5),
    },
}


def _check_type(path: str, value, types):
    if not isinstance(types, tuple):
        types = (types,)
    # bool is an int subclass; do not let true/false pass as numbers
    if isinstance(value, bool) and bool not in types:
        raise ConfigError(f"{path}: expected {'/'.join(t.__name__ for t in types)}, got a boolean")
    if not isinstance(value, types):
        raise ConfigError(f"{path}: expected {'/'.join(t.__name__ for t in types)}, got {type(value).__name__}")


def _merge(schema: dict, data: dict, prefix: str = "") -> dict:
    out = {}
    for key in data:
        if key not in schema:
            raise ConfigError(f"unknown key {prefix}{key!r}")
    for key, spec in schema.items():
        path = f"{prefix}{key}"
        if isinstance(spec, dict):
            sub = data.get(key, {})
            if not isinstance(sub, dict):
                raise ConfigError(f"{path} must be a table")
            if key == "tolerances":
                for name, tol in sub.items():
                    _check_type(f"{path}.{name}", tol, _NUM)
                out[key] = {k: float(v) for k, v in sub.items()}
            else:
                out[key] = _merge(spec, sub, path + ".")
        else:
            types, default = spec
            if key in data:
                _check_type(path, data[key], types)
                out[key] = data[key]
            else:
                out[key] = copy.deepcopy(default)
    return out


def parse_config(data: dict) -> dict:
    """Validate a parsed TOML mapping and fill in defaults."""
    cfg = _merge(SCHEMA, data)
    if cfg["suite"] is not None and cfg["suite"] not in ALL_SUITES:
        raise ConfigError(f"unknown suite {cfg['suite']!r}; choose from {', '.join(ALL_SUITES)}")
    if not 0 <= cfg["seed"] < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned integer")
    if cfg["tolerance_scale"] <= 0:
        raise ConfigError("tolerance_scale must be positive")
    if cfg["cocycle"]["mode"] not in ("contractive", "positive", "projective"):
        raise ConfigError(f"cocycle.mode {cfg['cocycle']['mode']!r} is not contractive/positive/projective")
    if len(cfg["twisted"]["lambda"]) != len(cfg["twisted"]["mu"]):
        raise ConfigError("twisted.lambda and twisted.mu must have the same length")
    return cfg


def load_config(path: str | Path | None) -> dict:
    if path is None:
        return parse_config({})
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(data)


def default_config() -> dict:
    return parse_config({})
