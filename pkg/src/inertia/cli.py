"""``inertia`` command line: tabular, plot-ready outputs for every analysis.

Exit status: 0 success, 1 usage error, 2 data error.  Diagnostics go to
stderr; data goes to stdout or ``--output``.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
import warnings
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import harmonize, rank, stats, synth
from .ingest import (CANONICAL_HEADER, DataError, PanelDataset, load_fixture, parse_canonical,
                     parse_wide, ROLES)

SUBCOMMANDS = ("trend", "hist", "compare", "correct", "rank", "curve", "simulate")
DEFAULT_FIXTURE = {"rank": "appendix1", "curve": "table1", "simulate": "table1"}
DEFAULT_CURVES = (300.0, 600.0, 900.0, 1200.0)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    source: list[str] | None = None
    role: str = "gdppc"
    countries: list[str] | None = None
    start: int | None = None
    end: int | None = None
    output: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if self.start is not None and self.end is not None and not self.start < self.end:
            raise UsageError("--from must be before --to")


def _list(cast):
    def conv(text):
        items = [t.strip() for t in text.split(",")]
        if not text.strip() or any(not t for t in items):
            raise argparse.ArgumentTypeError(f"empty item in list {text!r}")
        return [cast(t) for t in items]
    return conv


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="inertia", description="Inertial GDP per capita growth analysis.")
    p.add_argument("command", choices=SUBCOMMANDS)
    p.add_argument("--input", action="append", default=[], metavar="PATH",
                   help="canonical or wide CSV; repeatable")
    p.add_argument("--source", type=_list(str), help="source tag (compare: A,B)")
    p.add_argument("--role", default="gdppc", choices=ROLES, help="role for wide-format inputs")
    p.add_argument("--country", type=_list(str), help="comma-separated country filter")
    p.add_argument("--from", "--t0", dest="start", type=int, metavar="YEAR")
    p.add_argument("--to", "--t1", dest="end", type=int, metavar="YEAR")
    p.add_argument("--cutoff", type=int, default=2000)
    p.add_argument("--bin-width", type=float)
    p.add_argument("--origin", type=float, default=0.0)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--increments", type=_list(float), default=list(DEFAULT_CURVES))
    p.add_argument("--levels", type=_list(float), help="explicit initial-level grid for curves")
    p.add_argument("--ref-year", type=int)
    p.add_argument("--switch-year", type=int, default=1979)
    p.add_argument("--ratio", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma", type=float, default=0.0, help="simulate: level noise std")
    p.add_argument("--tail-fraction", type=float, default=0.0)
    p.add_argument("--tail-scale", type=float, default=1.0)
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--output", metavar="PATH")
    return p


def fmt_float(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


def _json_value(x):
    if x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(f"{float(x):.6g}")


class Table:
    def __init__(self, columns, rows=(), meta=None):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.meta = dict(meta or {})

    def render(self, fmt: str) -> str:
        if fmt == "json":
            payload = {k: _json_value(v) for k, v in self.meta.items()}
            payload["rows"] = [{c: _json_value(v) for c, v in zip(self.columns, r)} for r in self.rows]
            return json.dumps(payload, indent=1) + "\n"
        out = io.StringIO()
        for k, v in self.meta.items():
            out.write(f"# {k}={v if isinstance(v, str) else fmt_float(v)}\n")
        out.write(",".join(self.columns) + "\n")
        for r in self.rows:
            out.write(",".join(_csv_cell(v) for v in r) + "\n")
        return out.getvalue()


def _csv_cell(v) -> str:
    if isinstance(v, str):
        return f'"{v}"' if ("," in v or '"' in v) else v
    return fmt_float(v)


def read_panel(paths, source_tag=None, role="gdppc") -> PanelDataset:
    panel = PanelDataset()
    for path in paths:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise DataError(f"cannot read {path}: {e.strerror}") from None
        head = text.split("\n", 1)[0].strip().split(",")
        if tuple(h.strip() for h in head) == CANONICAL_HEADER:
            part = parse_canonical(text, allow_gaps=True)
        else:
            if not source_tag:
                raise UsageError(f"{path}: wide input needs --source")
            part = parse_wide(text, source_tag, role, allow_gaps=True)
        panel = panel.merge(part)
    return panel


def _selection(cfg: RunConfig, panel: PanelDataset, role: str = "gdppc"):
    src = cfg.source[0] if cfg.source and len(cfg.source) == 1 else None
    sel = panel.select(cfg.countries, src, cfg.start, cfg.end)
    series = [sel.series[k] for k in sorted(sel.series) if k.role == role]
    if not series:
        raise DataError(f"no {role} series left after filtering")
    return series


def cmd_trend(cfg, args, panel) -> Table:
    rows = []
    for s in _selection(cfg, panel):
        f = stats.fit_trend(s)
        rows.append([s.country, s.source, f.n, f.period[0], f.period[1], f.A_hat, f.sigma,
                     f.slope_time, f.intercept_time, f.slope_level, f.intercept_level])
    return Table(["country", "source", "n", "first_year", "last_year", "mean_increment", "std_increment",
                  "slope_time", "intercept_time", "slope_level", "intercept_level"], rows)


def cmd_hist(cfg, args, panel) -> Table:
    pooled = []
    for s in _selection(cfg, panel):
        inc = stats.annual_increments(s)
        pooled.append(stats.normalize_increments(inc) if args.normalized else inc.deltas)
    values = np.concatenate(pooled)
    width = args.bin_width if args.bin_width is not None else (0.25 if args.normalized else 200.0)
    h = stats.histogram(values, width, args.origin)
    fit = stats.fit_normal_peak(values)
    expected = fit.expected_counts(h, len(values))
    rows = [[left, left + width, c, e] for (left, c), e in zip(h.bins, expected)]
    meta = {"n": len(values), "mu": fit.mu, "sigma_fit": fit.sigma_fit, "iterations": fit.iterations,
            "raw_mean": float(values.mean()), "raw_std": float(values.std(ddof=1))}
    return Table(["left", "right", "count", "fit_count"], rows, meta)


def cmd_compare(cfg, args, panel) -> Table:
    sel = panel.select(cfg.countries, None, cfg.start, cfg.end)
    rows, summary = [], []
    for country in sel.countries():
        srcs = cfg.source if cfg.source else sel.sources(country)
        avail = [s for s in srcs if sel.get(country, "gdppc", s) is not None]
        if len(avail) < 2:
            continue
        if len(avail) > 2:
            raise UsageError(f"{country}: more than two sources, pick two with --source A,B")
        a, b = (sel.get(country, "gdppc", s) for s in avail)
        ref = args.ref_year if args.ref_year is not None else max(a.first_year, b.first_year)
        c = harmonize.compare_sources(a, b, ref)
        for i, y in enumerate(c.years):
            rows.append([country, c.source_a, c.source_b, int(y), c.rebased_a[i], c.rebased_b[i],
                         c.difference[i], c.ratio[i]])
        summary.append(f"{country}:{c.total_growth_a:.6g}/{c.total_growth_b:.6g}")
    if not rows:
        raise DataError("no country has two comparable sources")
    return Table(["country", "source_a", "source_b", "year", "rebased_a", "rebased_b", "difference", "ratio"],
                 rows, {"total_growth": " ".join(summary)})


def cmd_correct(cfg, args, panel) -> Table:
    rows = []
    for s in _selection(cfg, panel):
        cpi = panel.get(s.country, "cpi")
        dgdp = panel.get(s.country, "dgdp")
        if cpi is None:
            raise DataError(f"{s.country}: no cpi series")
        if args.ratio is not None:
            dgdp = harmonize.backcast_dgdp(cpi, args.ratio, args.switch_year, dgdp)
        if dgdp is None:
            raise DataError(f"{s.country}: no dgdp series (or give --ratio)")
        pair = harmonize.DeflatorPair(cpi, dgdp, args.switch_year)
        out = harmonize.deflator_correct(s, pair)
        cmap = {o.year: o.value for o in cpi.observations}
        dmap = {o.year: o.value for o in dgdp.observations}
        for o, c in zip(s.observations, out.observations):
            rows.append([s.country, o.year, o.value, c.value, cmap.get(o.year), dmap.get(o.year)])
    return Table(["country", "year", "original", "corrected", "cpi", "dgdp"], rows,
                 {"switch_year": args.switch_year})


def cmd_rank(cfg, args, panel) -> Table:
    sel = panel.select(cfg.countries)
    src = cfg.source[0] if cfg.source else None
    rows = [[r.country, r.mean_increment, r.population, r.initial_level, r.total_growth]
            for r in rank.rank_by_increment(sel, args.cutoff, src)]
    if not rows:
        raise DataError("no country could be ranked")
    return Table(["country", "mean_increment", "population", "initial_level", "total_growth"], rows,
                 {"cutoff": args.cutoff})


def cmd_curve(cfg, args, panel) -> Table:
    t0 = cfg.start if cfg.start is not None else 1960
    t1 = cfg.end if cfg.end is not None else 2018
    sel = panel.select(cfg.countries)
    src = cfg.source[0] if cfg.source else None
    points, curves = rank.growth_scatter(sel, t0, t1, args.increments, src, args.levels)
    rows = [["point", p.country, p.initial_level, p.total_growth] for p in points]
    for a in sorted(curves):
        rows.extend(["curve", fmt_float(a), g0, f] for g0, f in curves[a])
    return Table(["kind", "label", "initial_level", "total_growth"], rows, {"t0": t0, "t1": t1})


def cmd_simulate(cfg, args, panel) -> Table:
    noise_kw = dict(sigma=args.sigma, tail_fraction=args.tail_fraction, tail_scale=args.tail_scale)
    synth.NoiseSpec(**noise_kw)
    tag = cfg.source[0] if cfg.source else "SYNTH"
    rows = []
    for country in panel.select(cfg.countries).countries():
        lv = panel.levels(country, "gdppc")
        if len(lv) < 2:
            continue
        start = cfg.start if cfg.start is not None else min(lv)
        end = cfg.end if cfg.end is not None else max(lv)
        if start not in lv:
            warnings.warn(f"{country}: no level in {start}, skipped", stacklevel=2)
            continue
        ref = panel.ref(country, "mean_increment")
        if ref is not None and ref.year == start:
            A = ref.value
        else:
            last = max(lv)
            A = (lv[last] - lv[start]) / (last - start)
        seed = int(np.random.SeedSequence([args.seed, zlib.crc32(country.encode())]).generate_state(1)[0])
        s = synth.gen_inertial(lv[start], A, start, end - start + 1, synth.NoiseSpec(seed=seed, **noise_kw),
                               country=country, source=tag)
        rows.extend([country, tag, "gdppc", o.year, o.value] for o in s.observations)
    if not rows:
        raise DataError("nothing to simulate")
    return Table(list(CANONICAL_HEADER), rows)


COMMANDS = {"trend": cmd_trend, "hist": cmd_hist, "compare": cmd_compare, "correct": cmd_correct,
            "rank": cmd_rank, "curve": cmd_curve, "simulate": cmd_simulate}


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(args.command, args.input, args.source, args.role, args.country,
                        args.start, args.end, args.output, args.fmt)
        if args.command == "compare" and cfg.source is not None and len(cfg.source) != 2:
            raise UsageError("compare needs --source A,B")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if cfg.inputs:
                panel = read_panel(cfg.inputs, cfg.source[0] if cfg.source else None, cfg.role)
            elif cfg.subcommand in DEFAULT_FIXTURE:
                panel = load_fixture(DEFAULT_FIXTURE[cfg.subcommand])
            else:
                raise UsageError(f"{cfg.subcommand} needs --input")
            table = COMMANDS[cfg.subcommand](cfg, args, panel)
        for w in caught:
            print(f"inertia: warning: {w.message}", file=stderr)
        text = table.render(cfg.fmt)
        if cfg.output:
            Path(cfg.output).write_text(text, encoding="utf-8")
        else:
            stdout.write(text)
        return 0
    except UsageError as e:
        print(f"inertia: usage error: {e}", file=stderr)
        return 1
    except (DataError, ValueError, KeyError) as e:
        print(f"inertia: data error: {e}", file=stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
