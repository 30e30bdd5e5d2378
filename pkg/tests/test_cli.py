import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from inertia import PanelDataset, gen_inertial, parse_canonical, to_canonical
from inertia.cli import run
from inertia.ingest import SeriesKey

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(line for line in text.splitlines() if not line.startswith("#")))


@pytest.fixture
def sim_panel(tmp_path):
    """Two synthetic sources for the Table 1 countries plus US CPI/deflator."""
    paths = []
    for seed, tag in ((1, "MPD"), (2, "TED")):
        p = tmp_path / f"{tag}.csv"
        code, _, err = invoke("simulate", "--seed", str(seed), "--sigma", "300", "--source", tag,
                              "--output", str(p))
        assert code == 0, err
        paths.append(p)
    years = np.arange(1960, 2019)
    dgdp = 1.035 ** (years - 1979)
    cpi = dgdp * np.where(years >= 1979, 1.005 ** (years - 1979), 1.0)
    idx = PanelDataset({
        SeriesKey("USA", "BEA", "cpi"): _series("USA", "BEA", years, cpi, "cpi"),
        SeriesKey("USA", "BEA", "dgdp"): _series("USA", "BEA", years, dgdp, "dgdp"),
    })
    p = tmp_path / "prices.csv"
    p.write_text(to_canonical(idx))
    paths.append(p)
    return paths


def _series(country, source, years, values, role):
    from inertia import AnnualSeries
    return AnnualSeries.from_arrays(country, source, years, values, role=role)


def test_rank_fixture_first_row(tmp_path):
    code, out, _ = invoke("rank", "--input", str(FIXTURES / "appendix1.csv"), "--cutoff", "2000", "--format", "csv")
    assert code == 0
    r = rows(out)
    assert (r[0]["country"], r[0]["mean_increment"]) == ("Qatar", "5999")
    assert r[-1]["country"] == "Syrian Arab Republic"


def test_rank_json():
    code, out, _ = invoke("rank", "--format", "json")
    payload = json.loads(out)
    assert payload["cutoff"] == 2000
    assert payload["rows"][0] == {"country": "Qatar", "mean_increment": 5999, "population": 2606,
                                  "initial_level": None, "total_growth": None}


def test_curve_contains_anchor(tmp_path):
    out_path = tmp_path / "curve.csv"
    code, _, _ = invoke("curve", "--increments", "300,600", "--t0", "1960", "--t1", "2018",
                        "--input", str(FIXTURES / "table1.csv"), "--levels", "5800,17200", "--output", str(out_path))
    assert code == 0
    r = rows(out_path.read_text())
    assert {"kind": "curve", "label": "300", "initial_level": "5800", "total_growth": "4"} in r
    usa = next(x for x in r if x["label"] == "USA")
    assert (usa["initial_level"], usa["total_growth"]) == ("18057", "3.06446")


def test_curve_default_grid_interpolates_anchor():
    code, out, _ = invoke("curve", "--increments", "300", "--from", "1960", "--to", "2018")
    r = [x for x in rows(out) if x["kind"] == "curve"]
    g = np.array([float(x["initial_level"]) for x in r])
    f = np.array([float(x["total_growth"]) for x in r])
    assert len(r) == 200
    assert np.interp(5800, g, f) == pytest.approx(4.0, abs=2e-3)


def test_trend_empty_country_filter(sim_panel):
    code, out, err = invoke("trend", "--input", str(sim_panel[0]), "--country", "")
    assert code == 1 and out == "" and "usage" in err


def test_unknown_flag_and_missing_input():
    assert invoke("trend", "--bogus")[0] == 1
    assert invoke("trend")[0] == 1
    assert invoke("explode")[0] == 1
    assert invoke("trend", "--input", "/nonexistent.csv")[0] == 2


def test_trend_no_match_is_data_error(sim_panel):
    code, _, err = invoke("trend", "--input", str(sim_panel[0]), "--country", "XXX")
    assert code == 2 and "no gdppc" in err


def test_trend_on_simulated(sim_panel):
    code, out, _ = invoke("trend", "--input", str(sim_panel[0]), "--country", "USA,AUS")
    assert code == 0
    r = rows(out)
    assert [x["country"] for x in r] == ["AUS", "USA"]
    assert abs(float(r[1]["mean_increment"]) - 643) < 20
    assert r[1]["n"] == "58"


def test_trend_noiseless_recovers_table_mean(tmp_path):
    p = tmp_path / "line.csv"
    invoke("simulate", "--country", "CHE", "--output", str(p))
    code, out, _ = invoke("trend", "--input", str(p))
    r = rows(out)[0]
    assert (r["mean_increment"], r["std_increment"], r["slope_time"]) == ("776", "0", "0")


def test_hist(sim_panel):
    code, out, _ = invoke("hist", "--input", str(sim_panel[0]))
    assert code == 0
    meta = dict(line[2:].split("=", 1) for line in out.splitlines() if line.startswith("#"))
    r = rows(out)
    assert sum(int(x["count"]) for x in r) == int(meta["n"]) == 17 * 58
    assert all(float(x["left"]) % 200 == 0 for x in r)
    code, out, _ = invoke("hist", "--input", str(sim_panel[0]), "--normalized", "--format", "json")
    payload = json.loads(out)
    assert payload["rows"][1]["right"] - payload["rows"][1]["left"] == 0.25


def test_compare(sim_panel):
    code, out, err = invoke("compare", "--input", str(sim_panel[0]), "--input", str(sim_panel[1]),
                            "--country", "AUT", "--ref-year", "1960")
    assert code == 0, err
    r = rows(out)
    assert r[0]["year"] == "1960" and r[0]["difference"] == "0" and r[0]["ratio"] == "1"
    assert len(r) == 59
    assert invoke("compare", "--input", str(sim_panel[0]), "--source", "MPD")[0] == 1


def test_correct(sim_panel):
    args = ["correct", "--input", str(sim_panel[0]), "--input", str(sim_panel[2]), "--country", "USA",
            "--switch-year", "1979"]
    code, out, err = invoke(*args)
    assert code == 0, err
    r = {int(x["year"]): x for x in rows(out)}
    assert r[1978]["original"] == r[1978]["corrected"]
    expected = float(r[2018]["original"]) / 1.005 ** 39
    assert float(r[2018]["corrected"]) == pytest.approx(expected, rel=1e-5)
    code, out, _ = invoke(*args, "--ratio", "1.22")
    assert code == 0
    r = {int(x["year"]): x for x in rows(out)}
    assert float(r[1960]["dgdp"]) == pytest.approx(float(r[1960]["cpi"]) / 1.22, rel=1e-5)


def test_correct_without_prices(sim_panel):
    assert invoke("correct", "--input", str(sim_panel[0]), "--country", "USA")[0] == 2


def test_simulate_output_parses():
    code, out, _ = invoke("simulate", "--sigma", "460", "--tail-fraction", "0.05", "--tail-scale", "4")
    assert code == 0
    panel = parse_canonical(out)
    assert len(panel.series) == 17
    assert all(s.first_year == 1960 and s.last_year == 2018 for s in panel.series.values())
    assert invoke("simulate", "--tail-fraction", "0.7")[0] == 2


def test_simulate_country_seed_independent_of_filter():
    _, full, _ = invoke("simulate", "--sigma", "100", "--seed", "4")
    _, one, _ = invoke("simulate", "--sigma", "100", "--seed", "4", "--country", "NZL")
    assert set(one.splitlines()[1:]) <= set(full.splitlines())


def test_bad_window():
    assert invoke("curve", "--from", "2018", "--to", "1960")[0] == 1


def test_wide_input(tmp_path):
    p = tmp_path / "wide.csv"
    p.write_text("country,2000,2001,2002,2003\nAUT,100,110,125,130\n")
    code, out, err = invoke("trend", "--input", str(p), "--source", "OECD")
    assert code == 0, err
    assert rows(out)[0]["mean_increment"] == "10"
    assert invoke("trend", "--input", str(p))[0] == 1


def test_inputs_not_mutated(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text(open(str(FIXTURES / "table1.csv")).read())
    before = src.read_bytes()
    invoke("curve", "--input", str(src))
    invoke("simulate", "--input", str(src), "--output", str(tmp_path / "o.csv"))
    assert src.read_bytes() == before


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "inertia", "rank", "--country", "Qatar"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "Qatar,5999,2606" in proc.stdout
