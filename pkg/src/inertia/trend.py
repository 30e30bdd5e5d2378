"""Inertial growth: constant annual increment A, level G(t) = G0 + A*t.

The relative growth rate of such a trajectory is A/G, which decays towards
zero as the level rises.  Observed rates additionally carry a population
term 0.5 * dln(N)/dt.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ingest import AnnualSeries, DataError

POPULATION_COEF = 0.5


@dataclass(frozen=True)
class InertialParams:
    A: float
    G0: float
    t0: int = 0

    def __post_init__(self):
        if not self.G0 > 0:
            raise ValueError(f"G0 must be positive, got {self.G0}")
        if not math.isfinite(self.A):
            raise ValueError("A must be finite")

    def level(self, year: int) -> float:
        return project_linear(self, year - self.t0)


@dataclass(frozen=True)
class GrowthDecomposition:
    years: np.ndarray
    observed: np.ndarray
    trend: np.ndarray
    population: np.ndarray
    residual: np.ndarray


def trend_rate(A: float, G: float) -> float:
    if not G > 0:
        raise ValueError(f"level must be positive, got {G}")
    return A / G


def project_linear(p: InertialParams, t: float) -> float:
    return p.G0 + p.A * t


def total_growth_factor(G0: float, A: float, T: float) -> float:
    """G(T)/G(0) for a constant increment A; equals 1 + A*T/G0."""
    if not G0 > 0:
        raise ValueError(f"initial level must be positive, got {G0}")
    if T < 0:
        raise ValueError("T must be non-negative")
    return (G0 + A * T) / G0


def growth_curve(A: float, levels: Sequence[float], T: float) -> list[tuple[float, float]]:
    if len(levels) == 0:
        raise ValueError("empty level grid")
    bad = [g for g in levels if not (math.isfinite(g) and g > 0)]
    if bad:
        raise ValueError(f"invalid grid level {bad[0]}")
    return [(float(g), total_growth_factor(g, A, T)) for g in levels]


def compound_growth(rates: Sequence[float]) -> float:
    factor = 1.0
    for r in rates:
        if r <= -1:
            raise ValueError(f"rate {r} <= -1")
        factor *= 1.0 + r
    return factor


def population_term(pop: AnnualSeries) -> tuple[np.ndarray, np.ndarray]:
    """(years, 0.5*ln(N(t)/N(t-1))) for every year after the first."""
    n = pop.values
    if np.any(n <= 0):
        raise DataError(f"{pop.country}: non-positive population")
    return pop.years[1:], POPULATION_COEF * np.log(n[1:] / n[:-1])


def decompose_growth(gdppc: AnnualSeries, pop: AnnualSeries | None, A: float) -> GrowthDecomposition:
    """Split the observed yearly rate into A/G(t-1), the population term and a residual.

    Without a population series the population term is taken as zero.
    """
    g = gdppc.values
    if np.any(g <= 0):
        raise DataError(f"{gdppc.country}: non-positive level")
    years = gdppc.years[1:]
    observed = (g[1:] - g[:-1]) / g[:-1]
    trend = A / g[:-1]
    if pop is None:
        popt = np.zeros_like(observed)
    else:
        if (pop.first_year, pop.last_year) != (gdppc.first_year, gdppc.last_year):
            raise DataError(
                f"span mismatch: gdppc {gdppc.first_year}-{gdppc.last_year}, "
                f"population {pop.first_year}-{pop.last_year}"
            )
        _, popt = population_term(pop)
    return GrowthDecomposition(years, observed, trend, popt, observed - trend - popt)
