import math

import numpy as np
import pytest

from SkewLab.ensembles import sample_matrix
from SkewLab.exceptions import RejectedInputException
from SkewLab.spectra.concentration import (
    ConcentrationTable,
    concentration_statistic,
    fourth_central_moment,
    growth_slope,
    trace_power,
)
from tests.helpers import gen_spec


def test_fourth_central_moment():
    assert fourth_central_moment(np.array([0.0, 0.0, 1.0, 1.0])) == pytest.approx(0.0625)
    rows = fourth_central_moment(np.array([[1.0, 1.0], [0.0, 2.0]]), axis=-1)
    assert rows.tolist() == [0.0, 1.0]


def test_trace_power_matches_matrix_power():
    spec = gen_spec(n=12, regime="hankel")
    entries = sample_matrix(spec, 3).entries
    assert trace_power(spec, 2, 3) == pytest.approx(float(np.sum(entries**2)))
    assert trace_power(spec, 3, 3) == pytest.approx(float(np.trace(entries @ entries @ entries)))


def test_growth_slope():
    sizes = [8, 16, 32]
    ratios = [8.0, 16.0, 32.0]
    slope, stderr = growth_slope(sizes, ratios, [0.08, 0.16, 0.32])
    assert slope == pytest.approx(1.0)
    assert stderr > 0
    slope, stderr = growth_slope(sizes, [1.0, 0.25, 0.0625], [0.01, 0.0025, 0.000625])
    assert slope == pytest.approx(-2.0)
    assert all(math.isnan(v) for v in growth_slope(sizes, ratios, [0.0, 1.0, 1.0]))
    assert all(math.isnan(v) for v in growth_slope([8], [1.0], [0.1]))
    assert all(math.isnan(v) for v in growth_slope([8, 8], [1.0, 2.0], [0.1, 0.1]))


def test_concentration_table_bounded():
    table = ConcentrationTable(regime="iid", k=2, trials=50, rows=(), slope=1.0, slope_stderr=0.1)
    assert not table.bounded
    table = ConcentrationTable(regime="iid", k=2, trials=50, rows=(), slope=0.2, slope_stderr=0.1)
    assert table.bounded
    table = ConcentrationTable(
        regime="iid", k=2, trials=50, rows=(), slope=float("nan"), slope_stderr=float("nan")
    )
    assert not table.bounded


def test_concentration_statistic_iid_is_bounded():
    spec = gen_spec(n=8, regime="iid")
    table = concentration_statistic(spec, 2, [8, 16, 32], 50, seed=3, resamples=50)
    assert [row.n for row in table.rows] == [8, 16, 32]
    assert table.regime == "iid"
    assert table.bounded
    for row in table.rows:
        assert row.ratio_to_n2 == pytest.approx(row.fourth_central_moment / row.n**2)
        assert row.ratio_stderr > 0
    again = concentration_statistic(spec, 2, [8, 16, 32], 50, seed=3, resamples=50)
    assert again == table


def test_concentration_statistic_rejects_bad_input():
    spec = gen_spec(n=8, regime="iid")
    with pytest.raises(RejectedInputException):
        concentration_statistic(spec, 2, [8, 16], 49, seed=0)
    with pytest.raises(RejectedInputException):
        concentration_statistic(spec, 0, [8, 16], 50, seed=0)
    with pytest.raises(RejectedInputException):
        concentration_statistic(spec, 2, [], 50, seed=0)


def test_concentration_statistic_needs_two_distinct_sizes():
    spec = gen_spec(n=16, regime="hankel")
    with pytest.raises(RejectedInputException) as e:
        concentration_statistic(spec, 4, [16], 50, seed=0)
    assert "two distinct" in str(e.value)
    with pytest.raises(RejectedInputException) as e:
        concentration_statistic(spec, 4, [16, 16], 50, seed=0)
    assert "repeats" in str(e.value)
