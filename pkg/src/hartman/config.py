"""Scan configuration: ``key=value`` text files, ranges and validation.

A range is written ``min:max:steps`` (inclusive, linear spacing),
``min:max:steps:log`` (inclusive, logarithmic spacing) or as a single
number.  Validation collects every problem before raising
:class:`~hartman.errors.ConfigError`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .errors import ConfigError

MODES = ("unit", "layered", "real-limit", "non-pt", "audit")

#: accepted keys and their kind
KEYS = {
    "mode": "mode",
    "u": "float",
    "v": "float",
    "k": "range",
    "b": "range",
    "n": "intrange",
    "epsilon": "range",
    "length": "float",
    "out": "str",
    "allow_propagating": "bool",
    "precision": "int",
}

DEFAULTS = {
    "mode": "unit",
    "u": "2",
    "v": "1",
    "k": "1",
    "b": "1",
    "n": "1",
    "epsilon": "1",
    "length": "1",
    "out": "-",
    "allow_propagating": "false",
    "precision": "17",
}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class Range:
    """Inclusive grid from ``lo`` to ``hi`` with ``steps`` points."""

    lo: float
    hi: float
    steps: int = 1
    log: bool = False

    def values(self) -> np.ndarray:
        if self.steps == 1 or self.lo == self.hi:
            return np.full(self.steps, self.lo)
        if self.log:
            return np.geomspace(self.lo, self.hi, self.steps)
        return np.linspace(self.lo, self.hi, self.steps)

    def __len__(self) -> int:
        return self.steps


def parse_range(text: str, integer: bool = False) -> Range:
    """Parse ``min:max:steps[:log]`` or a single number.

    >>> parse_range("0.5:40:3").values().tolist()
    [0.5, 20.25, 40.0]
    >>> parse_range("1:100:3:log").values().tolist()
    [1.0, 10.0, 100.0]
    """
    parts = [p.strip() for p in str(text).split(":")]
    log = False
    if len(parts) == 4:
        if parts[3].lower() != "log":
            raise ValueError(f"fourth range field must be 'log', got {parts[3]!r}")
        log = True
        parts = parts[:3]
    if len(parts) == 1:
        lo = hi = float(parts[0])
        steps = 1
    elif len(parts) == 3:
        lo, hi = float(parts[0]), float(parts[1])
        try:
            steps = int(parts[2])
        except ValueError:
            raise ValueError(f"steps must be an integer, got {parts[2]!r}") from None
    else:
        raise ValueError(f"expected 'min:max:steps[:log]' or a number, got {text!r}")
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("range bounds must be finite")
    if steps < 1:
        raise ValueError(f"empty range: steps must be >= 1, got {steps}")
    if hi < lo:
        raise ValueError(f"empty range: max {hi!r} < min {lo!r}")
    if steps == 1 and hi != lo:
        raise ValueError("a single-step range needs min == max")
    if log and lo <= 0:
        raise ValueError("log ranges need min > 0")
    if integer:
        vals = Range(lo, hi, steps, log).values()
        if not np.allclose(vals, np.round(vals)) or lo < 1:
            raise ValueError("N must be a positive integer (or an integer grid)")
    return Range(lo, hi, steps, log)


@dataclass(frozen=True)
class ScanConfig:
    mode: str = "unit"
    u: float = 2.0
    v: float = 1.0
    k: Range = field(default_factory=lambda: Range(1.0, 1.0))
    b: Range = field(default_factory=lambda: Range(1.0, 1.0))
    n: Range = field(default_factory=lambda: Range(1.0, 1.0))
    epsilon: Range = field(default_factory=lambda: Range(1.0, 1.0))
    length: float = 1.0
    out: str = "-"
    allow_propagating: bool = False
    precision: int = 17

    def n_values(self) -> list[int]:
        return [int(round(x)) for x in self.n.values()]

    def with_mode(self, mode: str) -> "ScanConfig":
        return replace(self, mode=mode)


def parse_key_values(text: str) -> tuple[dict, list]:
    """Split ``key=value`` lines (``#`` starts a comment). Returns ``(pairs, errors)``."""
    pairs, errors = {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected key=value, got {raw.strip()!r}")
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if key not in KEYS:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        pairs[key] = value
    return pairs, errors


def build_config(values: Mapping[str, str], errors: list | None = None) -> ScanConfig:
    """Validate raw string values (defaults filled in) into a :class:`ScanConfig`."""
    errors = list(errors or [])
    raw = {**DEFAULTS, **{k: v for k, v in values.items() if v is not None}}
    out = {}
    for key, kind in KEYS.items():
        text = str(raw[key])
        try:
            if kind == "mode":
                if text not in MODES:
                    raise ValueError(f"must be one of {', '.join(MODES)}")
                out[key] = text
            elif kind == "float":
                val = float(text)
                if not math.isfinite(val):
                    raise ValueError("must be finite")
                out[key] = val
            elif kind == "int":
                out[key] = int(text)
            elif kind == "range":
                out[key] = parse_range(text)
            elif kind == "intrange":
                out[key] = parse_range(text, integer=True)
            elif kind == "bool":
                low = text.lower()
                if low not in _TRUE | _FALSE:
                    raise ValueError("must be true or false")
                out[key] = low in _TRUE
            else:
                out[key] = text
        except ValueError as exc:
            errors.append(f"{key}={text!r}: {exc}")
    if "precision" in out and not 1 <= out["precision"] <= 17:
        errors.append(f"precision={out['precision']!r}: must be between 1 and 17")
    if "v" in out and out["v"] < 0:
        errors.append(f"v={out['v']!r}: must be non-negative")
    if "b" in out and out["b"].lo <= 0:
        errors.append("b: barrier half-widths must be positive")
    if "k" in out and out["k"].lo <= 0:
        errors.append("k: wavenumbers must be positive")
    if "length" in out and out["length"] <= 0:
        errors.append("length: must be positive")
    if {"k", "u", "allow_propagating"} <= out.keys() and not out["allow_propagating"] and out["k"].lo > 0:
        kmax = float(out["k"].values().max())
        if kmax * kmax >= out["u"]:
            errors.append(
                f"k up to {kmax!r} leaves the tunneling regime (k**2 >= u = {out['u']!r}); "
                "use allow_propagating=true to scan anyway"
            )
    if errors:
        raise ConfigError(errors)
    return ScanConfig(**out)


def parse_config(text: str, overrides: Mapping[str, str] | None = None) -> ScanConfig:
    """Parse a config file's text; ``overrides`` (e.g. CLI flags) win over file values.

    >>> parse_config("mode=unit\\nu=2\\nv=1\\nk=1\\nb=0.5:40:200").b.steps
    200
    """
    pairs, errors = parse_key_values(text)
    if overrides:
        for key, value in overrides.items():
            if value is None:
                continue
            key = key.replace("-", "_").lower()
            if key not in KEYS:
                errors.append(f"unknown key {key!r}")
                continue
            pairs[key] = str(value)
    return build_config(pairs, errors)
