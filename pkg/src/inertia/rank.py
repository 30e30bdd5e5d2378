"""Sub-period statistics, cross-country ranking and growth-vs-initial-level scatter."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ingest import AnnualSeries, DataError, PanelDataset
from .stats import annual_increments, increment_stats
from .trend import growth_curve

CURVE_POINTS = 200
CURVE_MARGIN = 1.2


@dataclass(frozen=True)
class RankRow:
    country: str
    mean_increment: float
    population: float | None = None
    initial_level: float | None = None
    total_growth: float | None = None
    window: tuple[int, int] | None = None


@dataclass(frozen=True)
class PeriodStat:
    start: int
    end: int
    mean: float
    std: float
    n: int

    @property
    def label(self) -> str:
        return f"{self.start}-{self.end}"


@dataclass(frozen=True)
class ScatterPoint:
    country: str
    initial_level: float
    total_growth: float
    mean_increment: float


def subperiod_stats(s: AnnualSeries, boundaries: Sequence[int]) -> list[PeriodStat]:
    """Mean and sample std of increments in each (b_i, b_i+1].

    The series' first and last years are added as outer boundaries when
    missing.
    """
    inc = annual_increments(s)
    b = sorted(set(int(x) for x in boundaries))
    if list(boundaries) != sorted(boundaries):
        raise ValueError("boundaries must be sorted")
    if b and (b[0] < s.first_year or b[-1] > s.last_year):
        raise ValueError(f"boundaries outside {s.first_year}-{s.last_year}")
    if not b or b[0] != s.first_year:
        b.insert(0, s.first_year)
    if b[-1] != s.last_year:
        b.append(s.last_year)
    out = []
    for lo, hi in zip(b, b[1:]):
        sel = (inc.years > lo) & (inc.years <= hi)
        if sel.sum() < 2:
            raise DataError(f"period {lo}-{hi} has fewer than 2 increments")
        mean, std = increment_stats(inc.deltas[sel])
        out.append(PeriodStat(lo, hi, mean, std, int(sel.sum())))
    return out


def _population(panel: PanelDataset, country: str, source: str | None) -> float | None:
    pop = panel.levels(country, "population", source)
    if pop:
        return pop[max(pop)] / 1000.0
    ref = panel.ref(country, "population", source)
    return None if ref is None else ref.value


def rank_by_increment(panel: PanelDataset, cutoff_year: int, source: str | None = None) -> list[RankRow]:
    """Countries sorted by mean increment since cutoff_year, descending, ties by name.

    The mean comes from the level endpoints when levels are available,
    otherwise from a published ``mean_increment`` reference value for the
    same cutoff.  Population is in thousands.
    """
    rows = []
    for country in panel.countries():
        levels = panel.levels(country, "gdppc", source)
        ref = panel.ref(country, "mean_increment", source)
        if levels and cutoff_year in levels and max(levels) > cutoff_year:
            g0, end = levels[cutoff_year], max(levels)
            if g0 <= 0:
                warnings.warn(f"{country}: non-positive level in {cutoff_year}, excluded", stacklevel=2)
                continue
            g1 = levels[end]
            rows.append(RankRow(country, (g1 - g0) / (end - cutoff_year), _population(panel, country, source),
                                g0, g1 / g0, (cutoff_year, end)))
        elif ref is not None and ref.year == cutoff_year:
            rows.append(RankRow(country, ref.value, _population(panel, country, source)))
        elif levels or ref is not None:
            warnings.warn(f"{country}: no value for {cutoff_year}, excluded", stacklevel=2)
    rows.sort(key=lambda r: (-r.mean_increment, r.country))
    return rows


def log_grid(lo: float, hi: float, n: int = CURVE_POINTS) -> np.ndarray:
    return np.geomspace(lo / CURVE_MARGIN, hi * CURVE_MARGIN, n)


def growth_scatter(panel: PanelDataset, t0: int, t1: int, curve_increments: Sequence[float],
                   source: str | None = None, levels: Sequence[float] | None = None):
    """Observed (G(t0), G(t1)/G(t0)) per country plus theoretical curves.

    Returns ``(points, curves)`` with ``curves`` mapping each increment to a
    list of (initial level, total growth) pairs.  The level grid is
    log-spaced over the observed initial levels unless ``levels`` is given.
    """
    if not t1 > t0:
        raise ValueError("t1 must be after t0")
    points = []
    for country in panel.countries():
        lv = panel.levels(country, "gdppc", source)
        if not lv:
            continue
        if t0 not in lv or t1 not in lv:
            warnings.warn(f"{country}: missing {t0} or {t1}, skipped", stacklevel=2)
            continue
        g0, g1 = lv[t0], lv[t1]
        if g0 <= 0:
            warnings.warn(f"{country}: non-positive level in {t0}, skipped", stacklevel=2)
            continue
        points.append(ScatterPoint(country, g0, g1 / g0, (g1 - g0) / (t1 - t0)))
    if not points:
        raise DataError(f"no country has levels for both {t0} and {t1}")
    if levels is None:
        init = [p.initial_level for p in points]
        levels = log_grid(min(init), max(init))
    T = t1 - t0
    curves = {float(a): growth_curve(float(a), levels, T) for a in curve_increments}
    return points, curves


def telescoping_gap(row: RankRow) -> float:
    """mean_increment * years - (G(end) - G(start)); zero up to rounding."""
    if row.window is None or row.initial_level is None:
        return math.nan
    years = row.window[1] - row.window[0]
    return row.mean_increment * years - row.initial_level * (row.total_growth - 1)
