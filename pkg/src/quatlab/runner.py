"""Suite registry, configuration and reports for the verification runner.

A suite turns a resolved :class:`SuiteConfig` into a list of :class:`CaseSpec`
thunks.  :func:`run_suite` evaluates them (optionally in a thread pool), each
with its own generator spawned from the seed, so the report body depends only
on the configuration.
"""
from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .errors import ConfigInvalid, QuatlabError, UnknownSuite
from .quadrature import default_workers

SCHEMA_VERSION = 1

#: values used when neither the command line nor the suite fixes a field
GLOBAL_DEFAULTS = {"l_max": 1.0, "k_range": 2, "mu": (0.5, 1.0), "R": (1.0,), "grid": 0, "samples": 5}


@dataclass(frozen=True)
class SuiteConfig:
    """Run configuration.  ``None`` fields take the suite's defaults.

    ``l_max`` is the largest ``l`` (half-integers allowed); ``grid`` raises the
    quadrature orders where a suite supports it; ``samples`` is the number of
    random points (or fields) per case; ``tol`` replaces every case tolerance
    of the suite.
    """

    suite: str
    l_max: float | None = None
    k_range: int | None = None
    mu: tuple[float, ...] | None = None
    R: tuple[float, ...] | None = None
    tol: float | None = None
    grid: int | None = None
    samples: int | None = None
    seed: int = 0
    workers: int | None = None

    def validate(self) -> "SuiteConfig":
        if self.l_max is not None and (self.l_max < 0 or (2 * self.l_max) % 1):
            raise ConfigInvalid("l_max must be a non-negative multiple of 1/2")
        if self.k_range is not None and self.k_range < 0:
            raise ConfigInvalid("k_range must be non-negative")
        if self.tol is not None and not self.tol > 0:
            raise ConfigInvalid("tolerances must be positive")
        if self.mu is not None and (not self.mu or any(not m > 0 for m in self.mu)):
            raise ConfigInvalid("mu values must be positive")
        if self.R is not None and (not self.R or any(not r > 0 for r in self.R)):
            raise ConfigInvalid("radii must be positive")
        if self.grid is not None and self.grid < 0:
            raise ConfigInvalid("grid must be non-negative")
        if self.samples is not None and self.samples < 1:
            raise ConfigInvalid("samples must be at least 1")
        if self.workers is not None and self.workers < 1:
            raise ConfigInvalid("workers must be at least 1")
        if self.seed < 0:
            raise ConfigInvalid("seed must be non-negative")
        return self

    @property
    def two_l_max(self) -> int:
        return int(round(2 * self.l_max))

    def resolved(self, defaults: dict) -> "SuiteConfig":
        merged = {**GLOBAL_DEFAULTS, **defaults}
        upd = {k: v for k, v in merged.items() if getattr(self, k) is None}
        if self.workers is None:
            upd["workers"] = default_workers()
        return replace(self, **upd).validate()

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("mu", "R"):
            if d[k] is not None:
                d[k] = list(d[k])
        return d


@dataclass(frozen=True)
class CaseSpec:
    case_id: str
    description: str
    tolerance: float
    run: Callable[[np.random.Generator], float]


@dataclass(frozen=True)
class CaseReport:
    suite: str
    case_id: str
    description: str
    observed: float
    tolerance: float
    passed: bool = field(init=False)
    wall_time: float = 0.0
    error: str | None = None

    def __post_init__(self):
        ok = self.error is None and math.isfinite(self.observed) and self.observed <= self.tolerance
        object.__setattr__(self, "passed", bool(ok))


@dataclass
class VerificationReport:
    suite: str
    config: SuiteConfig
    cases: list[CaseReport]
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def n_failed(self) -> int:
        return sum(not c.passed for c in self.cases)

    def to_dict(self, timing: bool = True) -> dict:
        cases = []
        for c in self.cases:
            d = asdict(c)
            if not math.isfinite(d["observed"]):
                d["observed"] = None
            if not timing:
                d.pop("wall_time")
            cases.append(d)
        out: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "config": self.config.to_dict(),
            "seed": self.config.seed,
            "workers": self.config.workers,
            "passed": self.passed,
            "n_cases": len(self.cases),
            "n_failed": self.n_failed,
            "cases": cases,
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, default=_json_default) + "\n")

    def write_csv(self, path) -> None:
        cols = [f.name for f in fields(CaseReport)]
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols)
            w.writeheader()
            for c in self.cases:
                w.writerow(asdict(c))


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    anchor: str
    build: Callable[[SuiteConfig], list[CaseSpec]]
    defaults: dict


_REGISTRY: dict[str, Suite] = {}


def register(name: str, description: str, anchor: str, **defaults):
    def deco(fn):
        if name in _REGISTRY:
            raise ValueError(f"suite {name!r} registered twice")
        _REGISTRY[name] = Suite(name, description, anchor, fn, defaults)
        return fn
    return deco


def _load_suites() -> None:
    from . import suites  # noqa: F401  (registers on import)


def get_suite(name: str) -> Suite:
    _load_suites()
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownSuite(f"no suite named {name!r}") from None


def list_suites() -> list[tuple[str, str, str]]:
    """``(name, description, anchor)`` in registration order."""
    _load_suites()
    return [(s.name, s.description, s.anchor) for s in _REGISTRY.values()]


# ---------------------------------------------------------------------------
# execution


def _evaluate(suite: str, spec: CaseSpec, seq: np.random.SeedSequence, tol: float | None) -> CaseReport:
    rng = np.random.default_rng(seq)
    t0 = time.perf_counter()
    err = None
    try:
        obs = float(spec.run(rng))
    except QuatlabError as exc:
        obs, err = math.inf, f"{type(exc).__name__}: {exc}"
    return CaseReport(suite, spec.case_id, spec.description, obs,
                      spec.tolerance if tol is None else tol,
                      wall_time=time.perf_counter() - t0, error=err)


def run_suite(config: SuiteConfig) -> VerificationReport:
    suite = get_suite(config.suite)
    cfg = config.validate().resolved(suite.defaults)
    t0 = time.perf_counter()
    specs = suite.build(cfg)
    seqs = np.random.SeedSequence(cfg.seed).spawn(len(specs))
    if cfg.workers == 1:
        cases = [_evaluate(suite.name, s, q, cfg.tol) for s, q in zip(specs, seqs)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as ex:
            cases = list(ex.map(lambda a: _evaluate(suite.name, *a, cfg.tol), zip(specs, seqs)))
    return VerificationReport(suite.name, cfg, cases, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# config files


def _read_table(path: Path) -> dict:
    if path.suffix == ".json":
        return json.loads(path.read_text())
    if path.suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python 3.10
            import tomli as tomllib
        return tomllib.loads(path.read_text())
    raise ConfigInvalid(f"config file must be .toml or .json, got {path.suffix!r}")


def load_config_file(path) -> dict:
    """Read a config file into a dict of :class:`SuiteConfig` fields.

    Both ``{"suite": ..., "mu": [...]}`` and a nested ``[run]`` table are
    accepted.
    """
    path = Path(path)
    try:
        data = _read_table(path)
    except (OSError, ValueError) as exc:
        raise ConfigInvalid(f"cannot read {path}: {exc}") from None
    if "run" in data and isinstance(data["run"], dict):
        data = data["run"]
    names = {f.name for f in fields(SuiteConfig)}
    unknown = set(data) - names
    if unknown:
        raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
    for k in ("mu", "R"):
        if k in data:
            v = data[k]
            data[k] = tuple(float(x) for x in (v if isinstance(v, list) else [v]))
    return data
