import math

import numpy as np
import pytest
from scipy.stats import norm

from inertia import (NoiseSpec, annual_increments, fit_trend, gen_inertial, histogram, total_growth_factor,
                     validate_series)
from inertia.synth import replicate


def test_noiseless_line():
    s = gen_inertial(18057.0, 643.0, 1960, 59)
    assert s.value_at(2018) == 55351.0
    assert round(s.value_at(2018) / s.value_at(1960), 3) == 3.065
    assert s.value_at(2018) / s.value_at(1960) == pytest.approx(total_growth_factor(18057, 643, 58), rel=1e-15)
    f = fit_trend(s)
    assert (f.A_hat, f.sigma, f.slope_time, f.slope_level) == (643.0, 0.0, 0.0, 0.0)
    assert validate_series(s) == []


def test_seed_determinism():
    spec = NoiseSpec(460.0, 0.05, 4.0, seed=11)
    a = gen_inertial(14000.0, 600.0, 1960, 59, spec)
    b = gen_inertial(14000.0, 600.0, 1960, 59, spec)
    assert a == b
    c = gen_inertial(14000.0, 600.0, 1960, 59, NoiseSpec(460.0, 0.05, 4.0, seed=12))
    assert a != c


@pytest.mark.parametrize("kw", [dict(sigma=-1), dict(tail_fraction=0.5), dict(tail_scale=0.5)])
def test_noise_spec_invariants(kw):
    with pytest.raises(ValueError):
        NoiseSpec(**kw)


def test_gen_preconditions():
    with pytest.raises(ValueError):
        gen_inertial(0.0, 1.0, 1960, 10)
    with pytest.raises(ValueError):
        gen_inertial(1.0, 1.0, 1960, 1)


def test_clamping_reported():
    with pytest.warns(UserWarning, match="clamped"):
        s = gen_inertial(100.0, -50.0, 1960, 10)
    assert np.all(s.values > 0)


def test_estimator_recovery():
    reps = replicate(14000.0, 600.0, 1960, 59, NoiseSpec(460.0, seed=2021), 200)
    fits = [fit_trend(s) for s in reps]
    band = 3 * (460 / math.sqrt(58)) / math.sqrt(200)
    assert abs(np.mean([f.A_hat for f in fits]) - 600) < band
    # slope_time std across replications; oracle by spread of the sample itself
    slopes = np.array([f.slope_time for f in fits])
    assert abs(slopes.mean()) < 3 * slopes.std(ddof=1) / math.sqrt(len(slopes))


def test_heavy_tail_signature():
    s = gen_inertial(1e9, 0.0, 1800, 200_001, NoiseSpec(100.0, 0.05, 4.0, seed=5))
    d = annual_increments(s).deltas
    # core increment std is sqrt(2)*sigma; tail prediction for that Gaussian
    core = math.sqrt(2) * 100.0
    observed = np.mean(np.abs(d) > 2 * core)
    assert observed > 2 * norm.sf(2)
    h = histogram(d, 50.0)
    assert h.counts.sum() == len(d)
