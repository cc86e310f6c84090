"""Experiment configuration: a flat ``key = value`` file plus CLI overrides.

Recognised keys::

    symbols.f        catalog label of f (required)
    symbols.g        label of g (default: conjugate of f)
    grid.ns          comma-separated sizes, strictly increasing
    grid.epsilons    comma-separated thresholds, strictly decreasing
    trunc.K          coefficient truncation for the fixed-K suites
    trunc.inner      inner truncation of Hankel products (default 4K)
    sample.M         sampling grid size, power of two
    suites           comma-separated suite names, or "all"
    out.dir          output directory
    seed             integer seed for the randomized checks
    trials           number of random states in the Uchiyama check
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from ..spectral import DEFAULT_EPSILONS, DEFAULT_NS
from ..symbols import DEFAULT_K, DEFAULT_M, SymbolError, parse_label

SUITES = (
    "widom",
    "positivity",
    "uchiyama",
    "cluster",
    "flip",
    "mo-profile",
    "compactness-probe",
    "semicommutator-compactness",
    "vmo-characterization",
    "product-clustering",
)
VERIFY_SUITES = ("semicommutator-compactness", "vmo-characterization", "product-clustering")


class ConfigError(ValueError):
    """Invalid configuration; the CLI maps it to exit code 2."""


class UnknownSymbolError(ConfigError):
    pass


class GridError(ConfigError):
    pass


class OutputDirError(ConfigError):
    pass


class PreconditionError(ConfigError):
    """A suite's hypotheses do not hold for the configured symbols."""


@dataclass(frozen=True)
class ExperimentConfig:
    f: str = "cos"
    g: str | None = None
    ns: tuple = DEFAULT_NS
    epsilons: tuple = DEFAULT_EPSILONS
    K: int = DEFAULT_K
    inner: int | None = None
    M: int = DEFAULT_M
    suites: tuple = ()
    out_dir: str = "out"
    seed: int = 0
    trials: int = 1000

    @property
    def inner_len(self) -> int:
        return self.inner if self.inner is not None else 4 * self.K

    def validate(self) -> "ExperimentConfig":
        ns, eps = list(self.ns), list(self.epsilons)
        if not ns or any(n < 1 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
            raise GridError(f"grid.ns must be positive and strictly increasing, got {ns}")
        if not eps or any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
            raise GridError(f"grid.epsilons must be positive and strictly decreasing, got {eps}")
        if self.K < 1:
            raise GridError(f"trunc.K must be positive, got {self.K}")
        if self.inner is not None and self.inner < 1:
            raise GridError(f"trunc.inner must be positive, got {self.inner}")
        if self.M < 8 or self.M & (self.M - 1):
            raise GridError(f"sample.M must be a power of two >= 8, got {self.M}")
        if self.trials < 1:
            raise GridError(f"trials must be positive, got {self.trials}")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s) {unknown}; choose from {', '.join(SUITES)}")
        for label in filter(None, (self.f, self.g)):
            try:
                parse_label(label)
            except SymbolError as exc:
                raise UnknownSymbolError(str(exc)) from exc
        return self


def _ints(text):
    return tuple(int(x) for x in _split(text))


def _floats(text):
    return tuple(float(x) for x in _split(text))


def _split(text):
    return [p for p in (s.strip() for s in text.replace(";", ",").split(",")) if p]


def _suites(text):
    names = _split(text)
    if names == ["all"]:
        return SUITES
    return tuple(names)


_KEYS = {
    "symbols.f": ("f", str),
    "symbols.g": ("g", lambda t: t or None),
    "grid.ns": ("ns", _ints),
    "grid.epsilons": ("epsilons", _floats),
    "trunc.k": ("K", int),
    "trunc.inner": ("inner", int),
    "sample.m": ("M", int),
    "suites": ("suites", _suites),
    "out.dir": ("out_dir", str),
    "seed": ("seed", int),
    "trials": ("trials", int),
}


def parse_config_text(text: str) -> dict:
    """Raw ``key -> value`` strings from config text; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        out[key.strip().lower()] = value.strip()
    return out


def from_mapping(values: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    changes = {}
    for key, raw in values.items():
        key = key.lower()
        if key not in _KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        attr, conv = _KEYS[key]
        try:
            changes[attr] = conv(raw) if isinstance(raw, str) else raw
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from exc
    return replace(base or ExperimentConfig(), **changes).validate()


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            values = parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values.update(overrides or {})
    return from_mapping(values)


def check_output_dir(path) -> str:
    path = os.fspath(path)
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise OutputDirError(f"cannot create output directory {path}: {exc}") from exc
    if not os.access(path, os.W_OK):
        raise OutputDirError(f"output directory {path} is not writable")
    return path
