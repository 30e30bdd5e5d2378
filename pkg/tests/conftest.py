import numpy as np
import pytest

from inertia import AnnualSeries


def make_series(values, start=1960, country="TST", source="SRC", role="gdppc"):
    return AnnualSeries.from_arrays(country, source, np.arange(start, start + len(values)), values, role=role)


@pytest.fixture
def series():
    return make_series
