"""Inertial growth of real GDP per capita: constant annual increments plus fluctuations."""
from .ingest import (AnnualSeries, DataError, GapError, Observation, PanelDataset, ParseError,
                     SeriesKey, load_fixture, parse_canonical, parse_wide, to_canonical,
                     validate_series)
from .trend import (InertialParams, compound_growth, decompose_growth, growth_curve,
                    population_term, project_linear, total_growth_factor, trend_rate)
from .stats import (Histogram, IncrementSeries, NormalFit, TrendFit, annual_increments,
                    fit_normal_peak, fit_trend, histogram, increment_stats,
                    normalize_increments, ols, relative_rates)
from .harmonize import (DeflatorPair, SourceComparison, backcast_dgdp, compare_sources,
                        deflator_correct, rebase, series_ratio)
from .rank import PeriodStat, RankRow, growth_scatter, rank_by_increment, subperiod_stats
from .synth import NoiseSpec, gen_inertial

__version__ = "0.1.0"
