"""Config-driven Monte Carlo runs and their aggregation.

A run draws ``trials`` matrices, takes each spectrum once and records the
requested moments per trial. Trials are independent (each has its own
derived key), so they may be computed by several workers; aggregation is
always done in trial order, which keeps the output independent of the
worker count.
"""
from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .analytic import MomentReport
from .circuits import moment_from_words
from .ensemble import Distribution, EnsembleConfig, build_matrix
from .links import LinkFunction
from .spectral import Normalization, eigenvalues_symmetric, histogram
from .validation import check_ladder, check_moment_orders

__all__ = [
    "ExperimentConfig",
    "HistogramSpec",
    "OutputSpec",
    "RunningStats",
    "RawRun",
    "VarianceRow",
    "simulate",
    "summarize",
    "run_experiment",
    "variance_diagnostic",
    "load_config",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HistogramSpec:
    bins: int = 60
    normalization: Normalization = Normalization.SQRT_N
    range: Optional[tuple[float, float]] = None

    def __post_init__(self):
        if int(self.bins) < 1:
            raise ValueError("histogram bins must be >= 1")
        object.__setattr__(self, "normalization", Normalization(self.normalization))
        if self.range is not None:
            lo, hi = (float(x) for x in self.range)
            if not lo < hi:
                raise ValueError("histogram range must satisfy lo < hi")
            object.__setattr__(self, "range", (lo, hi))


@dataclass(frozen=True)
class OutputSpec:
    prefix: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        fmt = str(self.format).lower()
        if fmt not in ("csv", "table"):
            raise ValueError(f"output format must be 'csv' or 'table', got {self.format!r}")
        object.__setattr__(self, "format", fmt)


@dataclass(frozen=True)
class ExperimentConfig:
    ensemble: EnsembleConfig
    moments: tuple[int, ...] = (2, 4, 6)
    n_ladder: Optional[tuple[int, ...]] = None
    word_analysis: bool = False
    histogram: Optional[HistogramSpec] = None
    output: OutputSpec = field(default_factory=OutputSpec)
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "moments", check_moment_orders(self.moments))
        if self.n_ladder is not None:
            object.__setattr__(self, "n_ladder", check_ladder(self.n_ladder, minimum_points=1))
        if int(self.workers) < 1:
            raise ValueError("workers must be >= 1")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {"ensemble", "moments", "n_ladder", "word_analysis", "histogram", "output", "workers"}
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        ens = dict(doc.get("ensemble") or {})
        if "link" not in ens:
            raise ValueError("config needs ensemble.link")
        ensemble = EnsembleConfig(
            link=LinkFunction.from_dict(ens["link"]),
            n=int(ens.get("n", 1000)),
            distribution=Distribution.parse(ens.get("distribution", "standard_normal")),
            seed=int(ens.get("seed", 0)),
            trials=int(ens.get("trials", 200)),
        )
        hist = doc.get("histogram")
        return cls(
            ensemble=ensemble,
            moments=tuple(doc.get("moments", (2, 4, 6))),
            n_ladder=tuple(doc["n_ladder"]) if doc.get("n_ladder") else None,
            word_analysis=bool(doc.get("word_analysis", False)),
            histogram=HistogramSpec(**hist) if hist else None,
            output=OutputSpec(**(doc.get("output") or {})),
            workers=int(doc.get("workers", 1)),
        )

    def to_dict(self) -> dict:
        e = self.ensemble
        out = {
            "ensemble": {
                "link": e.link.to_dict(),
                "n": e.n,
                "distribution": e.distribution.value,
                "seed": e.seed,
                "trials": e.trials,
            },
            "moments": list(self.moments),
            "word_analysis": self.word_analysis,
            "output": {"prefix": self.output.prefix, "format": self.output.format},
            "workers": self.workers,
        }
        if self.n_ladder:
            out["n_ladder"] = list(self.n_ladder)
        if self.histogram:
            h = self.histogram
            out["histogram"] = {"bins": h.bins, "normalization": h.normalization.value, "range": h.range}
        return out

    def with_overrides(self, *, seed=None, n=None, trials=None, out=None, fmt=None) -> "ExperimentConfig":
        """Apply command-line overrides; ``None`` leaves a field alone."""
        e = self.ensemble
        ens = EnsembleConfig(
            link=e.link,
            n=e.n if n is None else n,
            distribution=e.distribution,
            seed=e.seed if seed is None else seed,
            trials=e.trials if trials is None else trials,
        )
        output = OutputSpec(
            prefix=self.output.prefix if out is None else out,
            format=self.output.format if fmt is None else fmt,
        )
        return replace(self, ensemble=ens, output=output)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: top level must be a JSON object")
    return ExperimentConfig.from_dict(doc)


class RunningStats:
    """Single-pass mean and variance (Welford), vectorized over moment orders."""

    def __init__(self, size: int):
        self.count = 0
        self.mean = np.zeros(size)
        self._m2 = np.zeros(size)

    def push(self, x) -> None:
        x = np.asarray(x, dtype=float)
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self._m2 += delta * (x - self.mean)

    @property
    def variance(self) -> np.ndarray:
        if self.count < 2:
            return np.zeros_like(self.mean)
        return self._m2 / (self.count - 1)

    @property
    def std_error(self) -> np.ndarray:
        if self.count < 2:
            return np.zeros_like(self.mean)
        return np.sqrt(self.variance / self.count)


def _trial_moments(ensemble: EnsembleConfig, ks: tuple[int, ...], trial: int):
    lam = eigenvalues_symmetric(build_matrix(ensemble, trial))
    x = lam / math.sqrt(ensemble.n)
    row = np.array([1.0 if k == 0 else float(np.sum(x**k)) / ensemble.n for k in ks])
    return row, lam


@dataclass
class RawRun:
    """Per-trial moments of one run; enough to rebuild every report."""

    config: ExperimentConfig
    per_trial: np.ndarray
    mean: np.ndarray
    std_error: np.ndarray
    variance: np.ndarray
    hist: Optional[tuple[np.ndarray, np.ndarray]] = None

    def to_dict(self) -> dict:
        return {"config": self.config.to_dict(), "per_trial": self.per_trial.tolist()}

    @classmethod
    def from_dict(cls, doc: dict) -> "RawRun":
        config = ExperimentConfig.from_dict(doc["config"])
        per_trial = np.asarray(doc["per_trial"], dtype=float).reshape(-1, len(config.moments))
        stats = RunningStats(len(config.moments))
        for row in per_trial:
            stats.push(row)
        return cls(config, per_trial, stats.mean.copy(), stats.std_error.copy(), stats.variance.copy())

    def save(self, path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.to_dict()), encoding="utf-8")
        return path

    @classmethod
    def load(cls, path) -> "RawRun":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def simulate(config: ExperimentConfig) -> RawRun:
    """Run all trials and aggregate them in trial order."""
    ens = config.ensemble
    ks = config.moments
    stats = RunningStats(len(ks))
    per_trial = np.empty((ens.trials, len(ks)))
    pooled = [] if config.histogram else None

    def work(t):
        try:
            return _trial_moments(ens, ks, t)
        except Exception as exc:
            raise RuntimeError(f"trial {t} of {ens.link.label} at N={ens.n} failed: {exc}") from exc

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = pool.map(work, range(ens.trials))
            for t, (row, lam) in enumerate(results):
                _collect(t, row, lam, stats, per_trial, pooled, ens.n)
    else:
        for t in range(ens.trials):
            row, lam = work(t)
            _collect(t, row, lam, stats, per_trial, pooled, ens.n)

    hist = None
    if config.histogram:
        h = config.histogram
        x = np.concatenate(pooled) / h.normalization.factor
        hist = histogram(x, bins=h.bins, range=h.range)
    return RawRun(config, per_trial, stats.mean.copy(), stats.std_error.copy(), stats.variance.copy(), hist)


def _collect(t, row, lam, stats, per_trial, pooled, n):
    stats.push(row)
    per_trial[t] = row
    if pooled is not None:
        pooled.append(lam / math.sqrt(n))
    if t and t % 50 == 0:
        log.debug("trial %d done", t)


def _combinatorial(link: LinkFunction, k: int):
    if k % 2:
        return (0.0, 0.0)
    if k == 0:
        return (1.0, 0.0)
    if k > 6:
        return None
    return moment_from_words(link, k)


def summarize(raw: RawRun, with_words: Optional[bool] = None) -> list[MomentReport]:
    cfg = raw.config
    ens = cfg.ensemble
    with_words = cfg.word_analysis if with_words is None else with_words
    reports = []
    for i, k in enumerate(cfg.moments):
        reports.append(
            MomentReport(
                link=ens.link,
                k=k,
                n=ens.n,
                trials=ens.trials,
                empirical=(float(raw.mean[i]), float(raw.std_error[i])),
                combinatorial=_combinatorial(ens.link, k) if with_words else None,
            )
        )
    return reports


def run_experiment(config: ExperimentConfig) -> list[MomentReport]:
    """Simulate, summarize and, when an output prefix is set, write files.

    Files: ``<prefix>.csv`` (or ``.txt`` for the table format),
    ``<prefix>_raw.json`` and, with a histogram, ``<prefix>_hist.csv``.
    """
    from .report import emit_report, write_histogram

    raw = simulate(config)
    reports = summarize(raw)
    prefix = config.output.prefix
    if prefix:
        Path(prefix).parent.mkdir(parents=True, exist_ok=True)
        ext = ".csv" if config.output.format == "csv" else ".txt"
        emit_report(reports, config.output.format, f"{prefix}{ext}")
        raw.save(f"{prefix}_raw.json")
        if raw.hist is not None:
            write_histogram(*raw.hist, f"{prefix}_hist.csv")
    return reports


@dataclass(frozen=True)
class VarianceRow:
    n: int
    k: int
    variance: float
    trials: int
    # True when the variance did not drop relative to the previous size
    flagged: bool = False


def variance_diagnostic(config: ExperimentConfig) -> list[VarianceRow]:
    """Sample variance of each ``M_k(A_N)`` along ``config.n_ladder``."""
    if not config.n_ladder or len(config.n_ladder) < 3:
        raise ValueError("variance_diagnostic needs an n_ladder with at least 3 sizes")
    rows = []
    prev: dict[int, float] = {}
    for n in config.n_ladder:
        sub = replace(config, ensemble=replace(config.ensemble, n=n), histogram=None)
        raw = simulate(sub)
        for i, k in enumerate(config.moments):
            v = float(raw.variance[i])
            flagged = k in prev and v >= prev[k] and not (v == 0.0 and prev[k] == 0.0)
            rows.append(VarianceRow(n, k, v, config.ensemble.trials, flagged))
            prev[k] = v
    return rows
