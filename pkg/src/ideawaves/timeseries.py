"""Weekly series tools: additive decomposition, [-1, 1] rescaling, DTW and random walks."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

RNG_ALGORITHM = "numpy PCG64 seeded by SeedSequence(entropy=[seed, ...])"


@dataclass(frozen=True, eq=False)
class WeeklySeries:
    dates: tuple
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ValueError("series contains missing or non-finite values")
        if len(self.dates) != len(values):
            raise ValueError("dates and values differ in length")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dates", tuple(self.dates))

    def __eq__(self, other):
        if not isinstance(other, WeeklySeries):
            return NotImplemented
        return self.dates == other.dates and np.array_equal(self.values, other.values)

    __hash__ = None

    @property
    def start_date(self):
        return self.dates[0] if self.dates else None

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_values(cls, values, start="w0"):
        values = np.asarray(values, dtype=float)
        return cls(tuple(f"{start}+{k}" for k in range(len(values))), values)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Components over the full series; trend and residual are NaN where the trend is undefined."""

    observed: np.ndarray
    trend: np.ndarray
    seasonal: np.ndarray
    residual: np.ndarray
    pattern: np.ndarray  # one period of the seasonal component
    valid: slice

    @property
    def core_residual(self):
        return self.residual[self.valid]

    def write_csv(self, path, dates=None):
        n = len(self.observed)
        dates = dates if dates is not None else [str(k) for k in range(n)]

        def cell(v):
            return "" if np.isnan(v) else "%.17g" % v

        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["date", "observed", "trend", "seasonal", "residual"])
            for k in range(n):
                w.writerow([dates[k], cell(self.observed[k]), cell(self.trend[k]), cell(self.seasonal[k]), cell(self.residual[k])])


def moving_average_filter(period):
    """Centred moving-average weights; even periods use the 2 x period average with half-weight ends."""
    if period % 2 == 0:
        w = np.ones(period + 1)
        w[0] = w[-1] = 0.5
    else:
        w = np.ones(period)
    return w / period


def decompose(series, period=52) -> Decomposition:
    """Additive split ``y = trend + seasonal + residual``.

    The trend is a centred moving average over one period, undefined for the
    first and last ``period // 2`` points. The seasonal pattern is the mean of
    the detrended values at each position within the period (counted from the
    first observation), shifted to zero mean and tiled over the series.
    """
    y = np.asarray(series.values if isinstance(series, WeeklySeries) else series, dtype=float)
    n = len(y)
    if period < 2:
        raise ValueError(f"period must be >= 2, got {period}")
    if n < 2 * period:
        raise ValueError(f"series too short for decomposition: {n} < {2 * period}")
    half = period // 2
    filt = moving_average_filter(period)
    trend = np.full(n, np.nan)
    trend[half:n - half] = np.convolve(y, filt, mode="valid")

    detrended = y - trend
    pattern = np.array([np.nanmean(detrended[k::period]) for k in range(period)])
    pattern -= pattern.mean()
    seasonal = np.tile(pattern, n // period + 1)[:n]
    residual = y - trend - seasonal
    return Decomposition(y, trend, seasonal, residual, pattern, slice(half, n - half))


def normalize_unit_range(values):
    """Affine map sending the minimum to -1 and the maximum to +1; constant input maps to zeros."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("cannot normalise an empty sequence")
    lo, hi = x.min(), x.max()
    if hi == lo:
        return np.zeros_like(x)
    out = 2.0 * (x - lo) / (hi - lo) - 1.0
    # pin the extremes against round-off
    out[x == lo] = -1.0
    out[x == hi] = 1.0
    return out


@njit(cache=True)
def _dtw_sq(a, b):
    n, m = a.shape[0], b.shape[0]
    prev = np.empty(m)
    cur = np.empty(m)
    d = a[0] - b[0]
    prev[0] = d * d
    for j in range(1, m):
        d = a[0] - b[j]
        prev[j] = d * d + prev[j - 1]
    for i in range(1, n):
        d = a[i] - b[0]
        cur[0] = d * d + prev[0]
        for j in range(1, m):
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            d = a[i] - b[j]
            cur[j] = d * d + best
        prev, cur = cur, prev
    return prev[m - 1]


def dtw(a, b) -> float:
    """Dynamic time warping distance with squared point cost, square-rooted at the end.

    No warping window; the full ``len(a) x len(b)`` cumulative cost is computed.
    """
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("dtw needs two non-empty sequences")
    return math.sqrt(_dtw_sq(a, b))


def make_rng(seed):
    """PCG64 generator from an int or a sequence of ints."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def random_walk(n, seed, scale=1.0):
    """Cumulative sum of ``n`` i.i.d. normal(0, scale**2) increments.

    ``seed`` is an int or a sequence of ints (e.g. ``[base, word, walk]``) so that
    each walk has its own stream independent of evaluation order.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    steps = make_rng(seed).standard_normal(int(n)) * scale
    return np.cumsum(steps)
