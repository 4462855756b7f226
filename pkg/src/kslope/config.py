"""Run configuration files (JSON) with line-precise diagnostics.

A minimal file::

    {
      "degree": 2,
      "sections": [[[1, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 0], [1, 0]]],
      "weights": [2, -1, -1]
    }

Each section is a list of low-to-high coefficients; a coefficient is either a
real number or an ``[re, im]`` pair.  Optional keys and their defaults are in
:data:`DEFAULTS`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import ConfigError, KSlopeError
from .experiment import default_schedule
from .grid import GridParams
from .predictor import DegenerationConfig

DEFAULTS = {
    "genus": 0,
    "t_schedule": None,  # five points log-spaced over [1e-3, 1e-1]
    "t_min": None,  # smallest t of the schedule
    "grid": {},
    "tolerance": 0.03,
    "convergence_tol": 0.01,
    "format": "json",
    "label": "",
}
REQUIRED = ("degree", "sections", "weights")
GRID_KEYS = set(GridParams().as_dict())
FORMATS = ("json", "csv")


@dataclass
class RunConfig:
    config: DegenerationConfig
    t_schedule: list[float]
    grid: GridParams = field(default_factory=GridParams)
    t_min: float | None = None
    tolerance: float = 0.03
    convergence_tol: float = 0.01
    format: str = "json"
    source: str | None = None


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _coeff(c, where: str) -> complex:
    if isinstance(c, bool):
        raise ValueError(f"{where}: booleans are not coefficients")
    if isinstance(c, (int, float)):
        return complex(c)
    if isinstance(c, list) and len(c) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in c):
        return complex(c[0], c[1])
    raise ValueError(f"{where}: expected a number or [re, im], got {c!r}")


def _number(doc, key, kind, text, positive=False):
    val = doc[key]
    ok = isinstance(val, (int, float)) and not isinstance(val, bool)
    if kind is int:
        ok = ok and float(val).is_integer()
    if not ok or (positive and val <= 0):
        adj = "positive " if positive else ""
        raise ConfigError(f"{key} must be a {adj}{kind.__name__}, got {val!r}", _line_of(text, key))
    return kind(val)


def parse_run_config(text: str, source: str | None = None) -> RunConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", exc.lineno, exc) from exc
    if not isinstance(doc, dict):
        raise ConfigError("top level must be a JSON object", 1)

    unknown = sorted(set(doc) - set(REQUIRED) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r}", _line_of(text, unknown[0]))
    for key in REQUIRED:
        if key not in doc:
            raise ConfigError(f"missing required key {key!r}", None)
    opts = {**DEFAULTS, **doc}

    degree = _number(doc, "degree", int, text)
    genus = _number(opts, "genus", int, text) if "genus" in doc else 0

    raw = doc["sections"]
    if not isinstance(raw, list) or not all(isinstance(s, list) for s in raw):
        raise ConfigError("sections must be a list of coefficient lists", _line_of(text, "sections"))
    try:
        sections = [[_coeff(c, f"section {i}") for c in s] for i, s in enumerate(raw)]
    except ValueError as exc:
        raise ConfigError(str(exc), _line_of(text, "sections"), exc) from exc

    weights = doc["weights"]
    if not isinstance(weights, list) or not all(
        isinstance(w, (int, float)) and not isinstance(w, bool) and float(w).is_integer() for w in weights
    ):
        raise ConfigError("weights must be a list of integers", _line_of(text, "weights"))
    weights = [int(w) for w in weights]

    try:
        config = DegenerationConfig(degree, sections, weights, genus=genus, metadata=str(opts["label"]))
    except (KSlopeError, ValueError) as exc:
        name = type(exc).__name__
        if "Weight" in name or "Anchor" in name:
            key = "weights"
        elif type(exc) is ValueError and "degree" in str(exc):
            key = "degree"
        else:
            key = "sections"
        raise ConfigError(f"{name}: {exc}", _line_of(text, key), exc) from exc

    if opts["t_schedule"] is None:
        schedule = default_schedule()
    else:
        schedule = opts["t_schedule"]
        line = _line_of(text, "t_schedule")
        if not isinstance(schedule, list) or not all(
            isinstance(t, (int, float)) and not isinstance(t, bool) and 0 < t <= 1 for t in schedule
        ):
            raise ConfigError("t_schedule must be a list of numbers in (0, 1]", line)
        schedule = [float(t) for t in schedule]
        if any(b >= a for a, b in zip(schedule, schedule[1:])):
            raise ConfigError("t_schedule must be strictly decreasing", line)

    grid = opts["grid"]
    if not isinstance(grid, dict):
        raise ConfigError("grid must be an object", _line_of(text, "grid"))
    bad = sorted(set(grid) - GRID_KEYS)
    if bad:
        raise ConfigError(f"unknown grid key {bad[0]!r}", _line_of(text, bad[0]))
    gvals = {}
    for key, val in grid.items():
        kind = type(getattr(GridParams(), key))
        gvals[key] = _number(grid, key, kind, text, positive=True)

    t_min = None if opts["t_min"] is None else _number(opts, "t_min", float, text, positive=True)
    tolerance = _number(opts, "tolerance", float, text, positive=True)
    conv = _number(opts, "convergence_tol", float, text, positive=True)
    fmt = opts["format"]
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}, got {fmt!r}", _line_of(text, "format"))

    return RunConfig(config, schedule, GridParams(**gvals), t_min, tolerance, conv, fmt, source)


def load_run_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}", None, exc) from exc
    return parse_run_config(text, path)
