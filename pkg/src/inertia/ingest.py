"""Panel ingestion: canonical long CSV, wide year-per-column CSV, bundled fixtures.

Canonical layout is ``country,source,role,year,value``.  Data roles
(``gdppc``, ``population``, ``working-age-population``, ``cpi``, ``dgdp``)
must form gapless annual series.  Roles prefixed with ``ref:`` carry scalar
reference values (published means, populations) and are kept apart from the
series.
"""
from __future__ import annotations

import csv
import io
import math
import os
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

import numpy as np

ROLES = ("gdppc", "population", "working-age-population", "cpi", "dgdp")
REF_PREFIX = "ref:"
CANONICAL_HEADER = ("country", "source", "role", "year", "value")
DEFAULT_UNITS = {
    "gdppc": "currency",
    "population": "persons",
    "working-age-population": "persons",
    "cpi": "index",
    "dgdp": "index",
}
LEVEL_ROLES = frozenset(ROLES)
YEAR_RANGE = (1800, 2100)
FIXTURES = ("table1", "appendix1")


class DataError(ValueError):
    """Input data violates a format or series invariant."""


class ParseError(DataError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GapError(DataError):
    def __init__(self, key, year: int):
        self.key = key
        self.year = year
        super().__init__(f"{'/'.join(map(str, key))}: missing year {year}")


class Observation(NamedTuple):
    year: int
    value: float


class SeriesKey(NamedTuple):
    country: str
    source: str
    role: str


@dataclass(frozen=True)
class AnnualSeries:
    """One country's year -> value series.

    Construction does not enforce invariants so that :func:`validate_series`
    can report on arbitrary input; parsers only emit valid series.
    """

    country: str
    source: str
    unit: str
    observations: tuple[Observation, ...]
    role: str = "gdppc"

    @classmethod
    def from_arrays(cls, country, source, years, values, unit=None, role="gdppc"):
        obs = tuple(Observation(int(y), float(v)) for y, v in zip(years, values))
        return cls(country, source, unit or DEFAULT_UNITS.get(role, "index"), obs, role)

    def __len__(self) -> int:
        return len(self.observations)

    @property
    def years(self) -> np.ndarray:
        return np.array([o.year for o in self.observations], dtype=int)

    @property
    def values(self) -> np.ndarray:
        return np.array([o.value for o in self.observations], dtype=float)

    @property
    def first_year(self) -> int:
        return self.observations[0].year

    @property
    def last_year(self) -> int:
        return self.observations[-1].year

    def value_at(self, year: int) -> float:
        i = year - self.first_year
        if not 0 <= i < len(self.observations) or self.observations[i].year != year:
            raise KeyError(year)
        return self.observations[i].value

    def window(self, start: int | None = None, end: int | None = None) -> "AnnualSeries":
        obs = tuple(
            o for o in self.observations
            if (start is None or o.year >= start) and (end is None or o.year <= end)
        )
        return AnnualSeries(self.country, self.source, self.unit, obs, self.role)

    def replace_values(self, values, unit: str | None = None) -> "AnnualSeries":
        obs = tuple(Observation(o.year, float(v)) for o, v in zip(self.observations, values))
        return AnnualSeries(self.country, self.source, unit or self.unit, obs, self.role)


@dataclass(frozen=True)
class PanelDataset:
    """Series keyed by (country, source, role).

    ``snapshots`` holds level observations that are not annually contiguous
    (decade tables); ``reference`` holds published scalar values keyed by
    (country, source, name) -> (year, value).
    """

    series: Mapping[SeriesKey, AnnualSeries] = field(default_factory=dict)
    snapshots: Mapping[SeriesKey, tuple[Observation, ...]] = field(default_factory=dict)
    reference: Mapping[tuple[str, str, str], Observation] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.series)

    def countries(self) -> list[str]:
        keys = set(self.series) | set(self.snapshots)
        names = {k.country for k in keys} | {k[0] for k in self.reference}
        return sorted(names)

    def sources(self, country: str, role: str = "gdppc") -> list[str]:
        keys = set(self.series) | set(self.snapshots)
        return sorted(k.source for k in keys if k.country == country and k.role == role)

    def get(self, country: str, role: str = "gdppc", source: str | None = None) -> AnnualSeries | None:
        if source is None:
            found = [s for k, s in self.series.items() if k.country == country and k.role == role]
            if len(found) > 1:
                raise DataError(f"{country}/{role}: several sources, select one")
            return found[0] if found else None
        return self.series.get(SeriesKey(country, source, role))

    def levels(self, country: str, role: str = "gdppc", source: str | None = None) -> dict[int, float]:
        """Year -> value from the contiguous series or the snapshot set."""
        srcs = [source] if source is not None else self.sources(country, role)
        if len(srcs) > 1:
            raise DataError(f"{country}/{role}: several sources ({', '.join(srcs)}), select one")
        if not srcs:
            return {}
        key = SeriesKey(country, srcs[0], role)
        if key in self.series:
            return {o.year: o.value for o in self.series[key].observations}
        return {o.year: o.value for o in self.snapshots.get(key, ())}

    def ref(self, country: str, name: str, source: str | None = None) -> Observation | None:
        hits = [v for (c, s, n), v in sorted(self.reference.items())
                if c == country and n == name and (source is None or s == source)]
        return hits[0] if hits else None

    def select(self, countries: Iterable[str] | None = None, source: str | None = None,
               start: int | None = None, end: int | None = None) -> "PanelDataset":
        wanted = None if countries is None else set(countries)

        def keep(country, src):
            return (wanted is None or country in wanted) and (source is None or src == source)

        series = {}
        for k, s in self.series.items():
            if keep(k.country, k.source):
                w = s.window(start, end)
                if len(w) >= 2:
                    series[k] = w
        snaps = {k: tuple(o for o in v if (start is None or o.year >= start) and (end is None or o.year <= end))
                 for k, v in self.snapshots.items() if keep(k.country, k.source)}
        ref = {k: v for k, v in self.reference.items() if keep(k[0], k[1])}
        return PanelDataset(series, {k: v for k, v in snaps.items() if v}, ref)

    def merge(self, other: "PanelDataset") -> "PanelDataset":
        dup = (set(self.series) | set(self.snapshots)) & (set(other.series) | set(other.snapshots))
        if dup:
            raise DataError(f"duplicate series {'/'.join(sorted(dup)[0])}")
        return PanelDataset({**self.series, **other.series},
                            {**self.snapshots, **other.snapshots},
                            {**self.reference, **other.reference})


def validate_series(s: AnnualSeries) -> list[str]:
    """Return the list of violated invariants; empty means valid."""
    problems = []
    if not s.country:
        problems.append("empty country code")
    if len(s.observations) < 2:
        problems.append(f"length: {len(s.observations)} observation(s), need at least 2")
    for o in s.observations:
        if not YEAR_RANGE[0] <= o.year <= YEAR_RANGE[1]:
            problems.append(f"year {o.year} outside {YEAR_RANGE[0]}..{YEAR_RANGE[1]}")
        if not math.isfinite(o.value):
            problems.append(f"non-finite value in {o.year}")
        elif s.role in LEVEL_ROLES and o.value <= 0:
            problems.append(f"positivity: value {o.value:g} in {o.year}")
    for prev, cur in zip(s.observations, s.observations[1:]):
        if cur.year != prev.year + 1:
            problems.append(f"gap: {prev.year} -> {cur.year}")
    return problems


def _build(groups, allow_gaps, units) -> PanelDataset:
    series, snaps, ref = {}, {}, {}
    for key, rows in groups.items():
        if key.role.startswith(REF_PREFIX):
            name = key.role[len(REF_PREFIX):]
            for year, value, _ in rows:
                ref[(key.country, key.source, name)] = Observation(year, value)
            continue
        rows = sorted(rows)
        obs = tuple(Observation(y, v) for y, v, _ in rows)
        gap = next((a.year + 1 for a, b in zip(obs, obs[1:]) if b.year != a.year + 1), None)
        if gap is not None:
            if not allow_gaps:
                raise GapError(key, gap)
            snaps[key] = obs
            continue
        s = AnnualSeries(key.country, key.source, units.get(key.role) or DEFAULT_UNITS[key.role], obs, key.role)
        problems = validate_series(s)
        if problems:
            raise DataError(f"{'/'.join(key)}: {problems[0]}")
        series[key] = s
    return PanelDataset(series, snaps, ref)


def _number(cell: str, line: int) -> float:
    try:
        v = float(cell)
    except ValueError:
        raise ParseError(f"non-numeric value {cell!r}", line) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite value {cell!r}", line)
    return v


def _year(cell: str, line: int) -> int:
    try:
        y = int(cell)
    except ValueError:
        raise ParseError(f"bad year {cell!r}", line) from None
    if not YEAR_RANGE[0] <= y <= YEAR_RANGE[1]:
        raise ParseError(f"year {y} outside {YEAR_RANGE[0]}..{YEAR_RANGE[1]}", line)
    return y


def parse_canonical(text: str, allow_gaps: bool = False, units: Mapping[str, str] | None = None) -> PanelDataset:
    """Parse the canonical long CSV.

    With ``allow_gaps`` non-contiguous groups become snapshots instead of
    raising :class:`GapError`.
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        return PanelDataset()
    if tuple(h.strip() for h in header) != CANONICAL_HEADER:
        raise ParseError(f"expected header {','.join(CANONICAL_HEADER)}", 1)
    groups: dict[SeriesKey, list] = defaultdict(list)
    seen = {}
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 5:
            raise ParseError(f"expected 5 fields, got {len(row)}", line)
        country, source, role = (c.strip() for c in row[:3])
        if not country or not source:
            raise ParseError("empty country or source", line)
        if role not in ROLES and not (role.startswith(REF_PREFIX) and len(role) > len(REF_PREFIX)):
            raise ParseError(f"unknown role {role!r}", line)
        year = _year(row[3].strip(), line)
        value = _number(row[4].strip(), line)
        key = SeriesKey(country, source, role)
        if (key, year) in seen:
            raise ParseError(f"duplicate {country}/{source}/{role}/{year} (first on line {seen[key, year]})", line)
        seen[key, year] = line
        groups[key].append((year, value, line))
    return _build(groups, allow_gaps, dict(units or {}))


def parse_wide(text: str, source: str, role: str = "gdppc", allow_gaps: bool = False,
               unit: str | None = None) -> PanelDataset:
    """Parse a ``country,<year>,<year>,...`` table, one country per row."""
    if role not in ROLES:
        raise DataError(f"unknown role {role!r}")
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        return PanelDataset()
    if not header or header[0].strip().lower() != "country":
        raise ParseError("first header cell must be 'country'", 1)
    years = [_year(h.strip(), 1) for h in header[1:]]
    if any(b <= a for a, b in zip(years, years[1:])):
        raise ParseError("year header is not strictly increasing", 1)
    groups: dict[SeriesKey, list] = {}
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        country = row[0].strip()
        cells = [c.strip() for c in row[1:]] + [""] * (len(years) - len(row) + 1)
        if len(cells) > len(years):
            raise ParseError(f"{len(cells)} value cells for {len(years)} years", line)
        filled = [i for i, c in enumerate(cells) if c]
        if not filled:
            warnings.warn(f"line {line}: no values for {country or '<blank>'}, skipped", stacklevel=2)
            continue
        if not country:
            raise ParseError("empty country", line)
        lo, hi = filled[0], filled[-1]
        blank = next((i for i in range(lo, hi + 1) if not cells[i]), None)
        if blank is not None:
            raise ParseError(f"missing interior value for {country} in {years[blank]}", line)
        key = SeriesKey(country, source, role)
        if key in groups:
            raise ParseError(f"duplicate country {country}", line)
        groups[key] = [(years[i], _number(cells[i], line), line) for i in range(lo, hi + 1)]
    return _build(groups, allow_gaps, {role: unit} if unit else {})


def _fmt_value(v: float) -> str:
    return f"{v:.17g}"


def to_canonical(panel: PanelDataset) -> str:
    """Serialize to canonical CSV; exact round trip through :func:`parse_canonical`."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CANONICAL_HEADER)
    rows = []
    for key, s in panel.series.items():
        rows.extend((*key, o.year, o.value) for o in s.observations)
    for key, obs in panel.snapshots.items():
        rows.extend((*key, o.year, o.value) for o in obs)
    for (c, src, name), o in panel.reference.items():
        rows.append((c, src, REF_PREFIX + name, o.year, o.value))
    for c, src, role, year, value in sorted(rows):
        w.writerow([c, src, role, year, _fmt_value(value)])
    return out.getvalue()


def fixtures_dir() -> Path:
    env = os.environ.get("INERTIA_FIXTURES")
    return Path(env) if env else Path(__file__).with_name("fixtures")


def load_fixture(name: str) -> PanelDataset:
    """Load a bundled fixture.

    ``table1``: decade snapshots 1960..2018 for 17 countries (2011 US$) with
    the published per-country mean/std increments as ``ref:`` values.
    ``appendix1``: mean increment since 2000 and 2018 population (thousands).
    """
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    text = (fixtures_dir() / f"{name}.csv").read_text(encoding="utf-8")
    return parse_canonical(text, allow_gaps=True, units={"gdppc": "2011 US$"})
