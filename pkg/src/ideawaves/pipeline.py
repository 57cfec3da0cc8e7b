"""Residual-versus-model comparison against a random-walk baseline.

For each word: decompose the weekly series, rescale the residual to [-1, 1],
find the transmission rate whose model trajectory is closest in DTW, and
compare that distance with the DTW distances to 500 rescaled random walks.
A word counts as significant when the model distance is below the first
quartile of the random-walk distances.
"""
from __future__ import annotations

import csv
import datetime as dt_
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import __version__
from .integrator import simulate
from .model import Params, State
from .timeseries import (
    RNG_ALGORITHM,
    WeeklySeries,
    decompose,
    dtw,
    normalize_unit_range,
    random_walk,
)


class LoadError(ValueError):
    pass


@dataclass(frozen=True)
class FitConfig:
    beta_min: float = 0.01
    beta_max: float = 0.3
    beta_steps: int = 30
    xi: float = 0.1
    alpha_offset: float = 0.01  # alpha = delta = Hopf value + offset
    n_random_walks: int = 500
    initial: tuple = (0.9, 0.1, 0.1)
    dt: float = 0.05
    weeks_per_time_unit: float = 1.0
    transient: float = 200.0
    period: int = 52

    def __post_init__(self):
        if not (0 < self.beta_min <= self.beta_max) or not math.isfinite(self.beta_max):
            raise ValueError(f"invalid beta range [{self.beta_min}, {self.beta_max}]")
        if self.beta_steps < 1:
            raise ValueError("beta_steps must be >= 1")
        if self.beta_steps == 1 and self.beta_min != self.beta_max:
            raise ValueError("a one-point beta grid needs beta_min == beta_max")
        if self.n_random_walks < 1:
            raise ValueError("n_random_walks must be >= 1")
        if not (self.xi > 0 and self.dt > 0 and self.weeks_per_time_unit > 0 and self.transient >= 0):
            raise ValueError("xi, dt and weeks_per_time_unit must be > 0, transient >= 0")
        object.__setattr__(self, "initial", tuple(float(v) for v in self.initial))
        self.sample_stride  # validates the time mapping

    @property
    def betas(self):
        return np.linspace(self.beta_min, self.beta_max, self.beta_steps)

    @property
    def min_weeks(self) -> int:
        return 2 * self.period

    @property
    def sample_stride(self) -> int:
        """Integrator steps per weekly sample."""
        steps = 1.0 / (self.weeks_per_time_unit * self.dt)
        k = int(round(steps))
        if k < 1 or abs(steps - k) > 1e-9 * max(1.0, steps):
            raise ValueError("1 / (weeks_per_time_unit * dt) must be a positive integer")
        return k

    def alpha_for(self, beta) -> float:
        return beta + self.xi + math.sqrt(self.xi * (beta + self.xi)) + self.alpha_offset

    def params_for(self, beta) -> Params:
        a = self.alpha_for(beta)
        return Params(float(beta), self.xi, a, a)


@dataclass(frozen=True)
class ComparisonRecord:
    word: str
    best_beta: float
    dtw_model: float
    dtw_rw_mean: float
    dtw_rw_q1: float
    significant: bool

    def __post_init__(self):
        if self.significant != (self.dtw_model < self.dtw_rw_q1):
            raise ValueError("significant must equal dtw_model < dtw_rw_q1")


@dataclass
class Report:
    records: list
    config: FitConfig
    seed: int
    skipped: list = field(default_factory=list)

    @property
    def fraction_significant(self) -> float:
        if not self.records:
            return 0.0
        return sum(r.significant for r in self.records) / len(self.records)

    def to_dict(self):
        return {
            "tool": "ideawaves",
            "version": __version__,
            "seed": self.seed,
            "rng": RNG_ALGORITHM,
            "config": asdict(self.config),
            "assumptions": [
                "delta = alpha in every candidate model",
                "residuals and random walks rescaled to [-1, 1] by the min-max affine map",
                f"one model time unit = {1.0 / self.config.weeks_per_time_unit:g} week(s); "
                f"first {self.config.transient:g} time units discarded",
                "first quartile uses the 'lower' order statistic",
            ],
            "records": [asdict(r) for r in self.records],
            "skipped": [{"word": w, "reason": why} for w, why in self.skipped],
            "fraction_significant": self.fraction_significant,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def write_json(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())

    def write_scatter_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["word", "dtw_rw_mean", "dtw_model", "significant"])
            for r in self.records:
                w.writerow([r.word, repr(r.dtw_rw_mean), repr(r.dtw_model), str(r.significant).lower()])


# -- ingestion -------------------------------------------------------------------


def _parse_date(text, lineno):
    try:
        return dt_.date.fromisoformat(text.strip())
    except ValueError:
        raise LoadError(f"line {lineno}: malformed date {text!r}") from None


def _parse_value(text, lineno, word):
    try:
        v = float(text)
    except ValueError:
        raise LoadError(f"line {lineno}: non-numeric value {text!r} for {word!r}") from None
    if not math.isfinite(v) or v < 0 or v > 100:
        raise LoadError(f"line {lineno}: value {text} for {word!r} outside [0, 100]")
    return v


def load_trends_csv(path, wide=False):
    """Read a weekly search-volume export.

    Long format (default) has header ``date,word,value``; wide format has
    ``date`` followed by one column per word. Returns a list of
    ``(word, WeeklySeries)`` in order of first appearance.
    """
    with open(path, newline="", encoding="utf-8-sig") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise LoadError("no data rows")
    header = [h.strip() for h in rows[0]]
    body = [(k + 2, r) for k, r in enumerate(rows[1:]) if any(c.strip() for c in r)]
    if not body:
        raise LoadError("no data rows")

    data = {}
    if wide:
        if len(header) < 2 or header[0] != "date":
            raise LoadError(f"line 1: wide header must be 'date,<word>,...', got {rows[0]}")
        words = header[1:]
        for w in words:
            data[w] = ([], [])
        for lineno, r in body:
            if len(r) != len(header):
                raise LoadError(f"line {lineno}: expected {len(header)} fields, got {len(r)}")
            d = _parse_date(r[0], lineno)
            for w, cellv in zip(words, r[1:]):
                data[w][0].append((d, lineno))
                data[w][1].append(_parse_value(cellv, lineno, w))
    else:
        if header != ["date", "word", "value"]:
            raise LoadError(f"line 1: header must be 'date,word,value', got {rows[0]}")
        for lineno, r in body:
            if len(r) != 3:
                raise LoadError(f"line {lineno}: expected 3 fields, got {len(r)}")
            d = _parse_date(r[0], lineno)
            w = r[1].strip()
            if not w:
                raise LoadError(f"line {lineno}: empty word")
            dates, vals = data.setdefault(w, ([], []))
            dates.append((d, lineno))
            vals.append(_parse_value(r[2], lineno, w))

    corpus = []
    for w, (dates, vals) in data.items():
        for (d0, _), (d1, ln) in zip(dates, dates[1:]):
            if not d1 > d0:
                raise LoadError(f"line {ln}: dates for {w!r} not in increasing order ({d1} after {d0})")
        corpus.append((w, WeeklySeries(tuple(d.isoformat() for d, _ in dates), np.array(vals))))
    return corpus


def write_trends_csv(path, corpus):
    """Long-format writer, the inverse of :func:`load_trends_csv`."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "word", "value"])
        for word, series in corpus:
            for d, v in zip(series.dates, series.values):
                w.writerow([d, word, repr(float(v))])


# -- model fit and baseline ------------------------------------------------------


@lru_cache(maxsize=256)
def _candidate(beta, config, length):
    params = config.params_for(beta)
    stride = config.sample_stride
    t_end = config.transient + length / config.weeks_per_time_unit
    traj = simulate(params, State(*config.initial), t_end, config.dt, stride)
    skip = int(round(config.transient * config.weeks_per_time_unit))
    i = traj.i[skip:skip + length]
    if len(i) < length:
        raise ValueError(f"model trajectory too short ({len(i)} < {length})")
    out = normalize_unit_range(i)
    out.setflags(write=False)
    return out


def model_candidate_series(beta, config: FitConfig, length):
    """Weekly samples of ``I(t)`` after the transient, rescaled to [-1, 1]."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return _candidate(float(beta), config, int(length))


def best_model_fit(residual, config: FitConfig):
    """``(best_beta, dtw_model)`` over the beta grid; ties go to the smaller beta."""
    residual = np.asarray(residual, dtype=float)
    if residual.size == 0:
        raise ValueError("empty residual")
    best = (None, math.inf)
    for beta in config.betas:
        d = dtw(residual, model_candidate_series(beta, config, residual.size))
        if d < best[1]:
            best = (float(beta), d)
    return best


@dataclass(frozen=True, eq=False)
class Baseline:
    mean: float
    q1: float
    distances: np.ndarray  # sorted ascending


def random_walk_baseline(residual, config: FitConfig, seed, word_index=0) -> Baseline:
    """DTW distances from the residual to ``n_random_walks`` rescaled random walks.

    Walk ``k`` is seeded with ``[seed, word_index, k]``.
    """
    residual = np.asarray(residual, dtype=float)
    if residual.size == 0:
        raise ValueError("empty residual")
    n = residual.size
    d = np.array(
        [
            dtw(residual, normalize_unit_range(random_walk(n, [seed, word_index, k])))
            for k in range(config.n_random_walks)
        ]
    )
    d.sort()
    q1 = float(np.quantile(d, 0.25, method="lower"))
    return Baseline(float(d.mean()), q1, d)


def compare_residual(word, residual, config: FitConfig, seed, word_index=0) -> ComparisonRecord:
    """Fit and baseline for an already rescaled residual."""
    best_beta, d_model = best_model_fit(residual, config)
    base = random_walk_baseline(residual, config, seed, word_index)
    return ComparisonRecord(word, best_beta, d_model, base.mean, base.q1, d_model < base.q1)


def residual_for(series, config: FitConfig):
    """Rescaled residual over the range where the trend is defined."""
    return normalize_unit_range(decompose(series, config.period).core_residual)


def run_report(corpus, config: FitConfig, seed) -> Report:
    """Run the comparison for every ``(word, WeeklySeries)`` in ``corpus``.

    Words that fail (too short, numerical trouble) are listed in
    ``Report.skipped`` instead of aborting the run.
    """
    corpus = list(corpus.items()) if isinstance(corpus, dict) else list(corpus)
    if not corpus:
        raise ValueError("empty corpus")
    records, skipped = [], []
    for k, (word, series) in enumerate(corpus):
        if len(series) < config.min_weeks:
            skipped.append((word, f"too_short: {len(series)} < {config.min_weeks} weeks"))
            continue
        try:
            records.append(compare_residual(word, residual_for(series, config), config, seed, k))
        except (ArithmeticError, ValueError) as exc:
            skipped.append((word, f"error: {exc}"))
    return Report(records, config, int(seed), skipped)
