"""Rebasing, cross-source comparison, CPI/deflator correction, series ratios."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest import AnnualSeries, DataError


@dataclass(frozen=True)
class SourceComparison:
    country: str
    source_a: str
    source_b: str
    ref_year: int
    years: np.ndarray
    rebased_a: np.ndarray
    rebased_b: np.ndarray
    difference: np.ndarray
    ratio: np.ndarray

    @property
    def total_growth_a(self) -> float:
        return float(self.rebased_a[-1])

    @property
    def total_growth_b(self) -> float:
        return float(self.rebased_b[-1])

    @property
    def growth_difference(self) -> float:
        return self.total_growth_a - self.total_growth_b

    @property
    def relative_difference(self) -> float:
        """Growth difference relative to source a's total growth."""
        return self.growth_difference / self.total_growth_a


@dataclass(frozen=True)
class DeflatorPair:
    """CPI and GDP deflator indices; corrections start at switch_year."""

    cpi: AnnualSeries
    dgdp: AnnualSeries
    switch_year: int

    def __post_init__(self):
        for s in (self.cpi, self.dgdp):
            if np.any(s.values <= 0):
                raise DataError(f"{s.country}/{s.role}: index must be positive")

    def cumulative_ratio(self, year: int) -> float:
        """(cpi(t)/cpi(s)) / (dgdp(t)/dgdp(s)) with s the switch year."""
        s = self.switch_year
        try:
            return (self.cpi.value_at(year) / self.cpi.value_at(s)) / (self.dgdp.value_at(year) / self.dgdp.value_at(s))
        except KeyError as e:
            raise DataError(f"price index does not cover {e.args[0]}") from None

    @property
    def post_switch_ratio(self) -> float:
        end = min(self.cpi.last_year, self.dgdp.last_year)
        return self.cumulative_ratio(end)


def _overlap(a: AnnualSeries, b: AnnualSeries) -> tuple[int, int]:
    lo, hi = max(a.first_year, b.first_year), min(a.last_year, b.last_year)
    if lo > hi:
        raise DataError(f"no overlap between {a.first_year}-{a.last_year} and {b.first_year}-{b.last_year}")
    return lo, hi


def rebase(s: AnnualSeries, ref_year: int) -> AnnualSeries:
    if not s.first_year <= ref_year <= s.last_year:
        raise DataError(f"reference year {ref_year} outside {s.first_year}-{s.last_year}")
    v = s.values
    if np.any(v <= 0):
        raise DataError(f"{s.country}: cannot rebase non-positive values")
    return s.replace_values(v / s.value_at(ref_year), unit="index")


def compare_sources(a: AnnualSeries, b: AnnualSeries, ref_year: int) -> SourceComparison:
    if a.country != b.country:
        raise DataError(f"country mismatch: {a.country} vs {b.country}")
    lo, hi = _overlap(a, b)
    if not lo <= ref_year <= hi:
        raise DataError(f"reference year {ref_year} outside overlap {lo}-{hi}")
    ra = rebase(a.window(lo, hi), ref_year).values
    rb = rebase(b.window(lo, hi), ref_year).values
    return SourceComparison(a.country, a.source, b.source, ref_year, np.arange(lo, hi + 1),
                            ra, rb, ra - rb, ra / rb)


def deflator_correct(gdppc: AnnualSeries, pair: DeflatorPair) -> AnnualSeries:
    """Re-deflate from switch_year on so that CPI inflation replaces the deflator.

    Earlier years are returned unchanged.
    """
    out = []
    for o in gdppc.observations:
        if o.year < pair.switch_year:
            out.append(o.value)
        else:
            out.append(o.value / pair.cumulative_ratio(o.year))
    return gdppc.replace_values(out)


def backcast_dgdp(cpi: AnnualSeries, ratio: float, switch_year: int,
                  dgdp: AnnualSeries | None = None) -> AnnualSeries:
    """Deflator extended into the past as cpi/ratio before switch_year.

    From switch_year on the values come from ``dgdp`` when given, otherwise
    from ``cpi`` unchanged.
    """
    if not ratio > 0:
        raise ValueError(f"ratio must be positive, got {ratio}")
    if np.any(cpi.values <= 0):
        raise DataError(f"{cpi.country}: CPI must be positive")
    late = {} if dgdp is None else {o.year: o.value for o in dgdp.observations if o.year >= switch_year}
    years, vals = [], []
    for o in cpi.observations:
        if o.year < switch_year:
            years.append(o.year)
            vals.append(o.value / ratio)
        elif dgdp is None:
            years.append(o.year)
            vals.append(o.value)
    for y in sorted(late):
        years.append(y)
        vals.append(late[y])
    if any(b != a + 1 for a, b in zip(years, years[1:])):
        raise DataError("backcast deflator would have a gap at the switch year")
    return AnnualSeries.from_arrays(cpi.country, cpi.source, years, vals, unit="index", role="dgdp")


def series_ratio(a: AnnualSeries, b: AnnualSeries) -> AnnualSeries:
    lo, hi = _overlap(a, b)
    den = b.window(lo, hi).values
    if np.any(den == 0):
        raise DataError("zero denominator")
    num = a.window(lo, hi)
    return AnnualSeries.from_arrays(a.country, a.source, num.years, num.values / den, unit="index", role="ratio")
