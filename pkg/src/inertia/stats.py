"""Increment statistics: differencing, trend fits, histograms, near-peak normal fits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import norm

from .ingest import AnnualSeries, DataError

# values within +-PEAK_K sigma of the current mean enter the next iteration
PEAK_K = 1.5
PEAK_MAX_ITER = 20
PEAK_MIN_N = 10


@dataclass(frozen=True)
class IncrementSeries:
    """First differences G(t) - G(t-1), labelled with the later year t."""

    country: str
    source: str
    unit: str
    years: np.ndarray
    deltas: np.ndarray

    def __len__(self) -> int:
        return len(self.deltas)


@dataclass(frozen=True)
class TrendFit:
    A_hat: float
    sigma: float
    slope_time: float
    intercept_time: float
    slope_level: float
    intercept_level: float
    n: int
    period: tuple[int, int]


@dataclass(frozen=True)
class Histogram:
    bin_width: float
    origin: float
    bins: tuple[tuple[float, int], ...]

    @property
    def counts(self) -> np.ndarray:
        return np.array([c for _, c in self.bins], dtype=int)

    @property
    def edges(self) -> np.ndarray:
        return np.array([e for e, _ in self.bins], dtype=float)


@dataclass(frozen=True)
class NormalFit:
    mu: float
    sigma_fit: float
    iterations: int
    n_core: int = 0

    def expected_counts(self, hist: Histogram, n: int) -> np.ndarray:
        left = hist.edges
        return n * (norm.cdf(left + hist.bin_width, self.mu, self.sigma_fit) - norm.cdf(left, self.mu, self.sigma_fit))


def annual_increments(s: AnnualSeries) -> IncrementSeries:
    if len(s) < 2:
        raise DataError(f"{s.country}: need at least 2 observations for increments")
    years = s.years
    if np.any(np.diff(years) != 1):
        gap = int(years[np.argmax(np.diff(years) != 1)] + 1)
        raise DataError(f"{s.country}: gap in years at {gap}")
    v = s.values
    return IncrementSeries(s.country, s.source, s.unit, years[1:], np.diff(v))


def relative_rates(s: AnnualSeries) -> tuple[np.ndarray, np.ndarray]:
    """(years, (G(t) - G(t-1)) / G(t-1))."""
    inc = annual_increments(s)
    v = s.values
    if np.any(v <= 0):
        raise DataError(f"{s.country}: non-positive level")
    return inc.years, inc.deltas / v[:-1]


def increment_stats(inc: IncrementSeries | Sequence[float]) -> tuple[float, float]:
    """Mean and sample (n-1) standard deviation."""
    d = np.asarray(inc.deltas if isinstance(inc, IncrementSeries) else inc, dtype=float)
    if len(d) < 2:
        raise DataError("need at least 2 increments")
    return float(np.mean(d)), float(np.std(d, ddof=1))


def ols(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Closed-form simple regression; returns (slope, intercept)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d and of equal length")
    if len(x) < 2:
        raise ValueError("need at least 2 points")
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise ValueError("regressor has zero variance")
    slope = float(dx @ (y - ym)) / sxx
    return slope, float(ym - slope * xm)


def fit_trend(s: AnnualSeries) -> TrendFit:
    if len(s) < 3:
        raise DataError(f"{s.country}: need at least 3 observations to fit a trend")
    inc = annual_increments(s)
    v = s.values
    n = len(inc)
    # endpoint form keeps mean * n equal to the level change
    a_hat = (v[-1] - v[0]) / n
    _, sigma = increment_stats(inc)
    st, it = ols(inc.years, inc.deltas)
    sl, il = ols(v[:-1], inc.deltas)
    return TrendFit(float(a_hat), sigma, st, it, sl, il, n, (int(inc.years[0]), int(inc.years[-1])))


def histogram(values: Sequence[float], bin_width: float = 200.0, origin: float = 0.0) -> Histogram:
    """Half-open bins [origin + k*w, origin + (k+1)*w) spanning min..max, empty ones included."""
    if not bin_width > 0:
        raise ValueError(f"bin width must be positive, got {bin_width}")
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("no values to bin")
    idx = np.floor((v - origin) / bin_width).astype(np.int64)
    lo, hi = int(idx.min()), int(idx.max())
    counts = np.bincount(idx - lo, minlength=hi - lo + 1)
    return Histogram(float(bin_width), float(origin),
                     tuple((origin + (lo + k) * bin_width, int(c)) for k, c in enumerate(counts)))


def _truncated_sd_factor(k: float) -> float:
    # sd of N(0,1) restricted to [-k, k]
    mass = 2 * norm.cdf(k) - 1
    return math.sqrt(1 - 2 * k * norm.pdf(k) / mass)


def fit_normal_peak(values: Sequence[float], k: float = PEAK_K, max_iter: int = PEAK_MAX_ITER) -> NormalFit:
    """Gaussian matching the core of a heavy-tailed sample.

    Starts from the full-sample mean/std and repeatedly recomputes both from
    the values within +-k current sigma of the current mean, until the
    selected set stops changing.  The trimmed std is rescaled by the std of a
    unit normal truncated at +-k so that a clean Gaussian is a fixed point.
    """
    v = np.asarray(values, dtype=float)
    if v.size < PEAK_MIN_N:
        raise DataError(f"need at least {PEAK_MIN_N} values for a peak fit, got {v.size}")
    c = _truncated_sd_factor(k)
    mu, sd = float(v.mean()), float(v.std(ddof=1))
    if sd == 0:
        return NormalFit(mu, 0.0, 0, int(v.size))
    mask = None
    it = 0
    for it in range(1, max_iter + 1):
        new = np.abs(v - mu) <= k * sd
        if new.sum() < 3:
            raise DataError("trimmed sample collapsed below 3 values")
        if mask is not None and np.array_equal(new, mask):
            it -= 1
            break
        mask = new
        core = v[mask]
        mu = float(core.mean())
        sd = float(core.std(ddof=1)) / c
        if sd == 0:
            break
    if not sd > 0:
        raise DataError("near-peak fit has zero width")
    return NormalFit(mu, sd, it, int(mask.sum()))


def normalize_increments(inc: IncrementSeries) -> np.ndarray:
    """Increments divided by the series' own mean increment."""
    m = float(np.mean(inc.deltas))
    if m == 0:
        raise DataError(f"{inc.country}: zero mean increment")
    return inc.deltas / m
