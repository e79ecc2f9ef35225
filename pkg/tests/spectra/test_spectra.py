import numpy as np
import pytest

from SkewLab.exceptions import EmptySimulationException, RejectedInputException
from SkewLab.spectra import (
    TRIAL_MOMENTS,
    Histogram,
    TrialRecord,
    empirical_moment,
    esd_histogram,
    ks_distance_to_semicircle,
    moment_report,
    pooled_histogram,
    run_trial,
    run_trials,
    semicircle_cdf,
    trial_seeds,
    validate_histogram,
)
from tests.helpers import frac, gen_sample, gen_spec


def gen_record(moments, n=64, seed=0, regime="iid"):
    moments = tuple(moments) + (0.0,) * (TRIAL_MOMENTS - len(moments))
    return TrialRecord(seed=seed, n=n, regime=regime, moments=moments, ks=0.1)


def test_eigenvalues_are_sorted():
    sample = gen_sample([[2, 0, 0], [0, -1, 0], [0, 0, 0.5]])
    assert sample.eigenvalues.tolist() == [-1.0, 0.5, 2.0]
    assert sample.n == 3
    assert not sample.eigenvalues.flags.writeable


def test_empirical_moment():
    sample = gen_sample([[0, 1], [1, 0]])
    assert empirical_moment(sample, 1) == pytest.approx(0.0, abs=1e-15)
    assert empirical_moment(sample, 2) == pytest.approx(1.0)
    assert empirical_moment(sample, 4) == pytest.approx(1.0)
    with pytest.raises(RejectedInputException):
        empirical_moment(sample, 0)


def test_semicircle_cdf():
    assert semicircle_cdf(-2) == 0.0
    assert semicircle_cdf(-5) == 0.0
    assert semicircle_cdf(0) == pytest.approx(0.5)
    assert semicircle_cdf(2) == 1.0
    values = semicircle_cdf(np.array([-1.0, 1.0]))
    assert values[0] + values[1] == pytest.approx(1.0)


def test_ks_distance_of_point_mass():
    assert ks_distance_to_semicircle(gen_sample(np.zeros((4, 4)))) == pytest.approx(0.5)


def test_esd_histogram():
    sample = gen_sample(np.diag([-4.0, 0.0, 0.5, 4.0]))
    histogram = esd_histogram(sample, bins=6, value_range=(-3, 3))
    assert histogram.underflow == 1
    assert histogram.overflow == 1
    assert sum(histogram.counts) == 2
    assert histogram.total == 4
    assert len(histogram.bins()) == 6
    assert histogram.edges[0] == -3.0
    assert histogram.edges[-1] == 3.0


def test_pooled_histogram():
    samples = [gen_sample(np.diag([0.1, 0.2])), gen_sample(np.diag([-0.1, 5.0]))]
    pooled = pooled_histogram(samples, bins=4, value_range=(-1, 1))
    assert pooled.total == 4
    assert pooled.overflow == 1
    assert pooled.counts == (0, 1, 2, 0)


def test_histogram_add_needs_same_bins():
    a = Histogram(edges=(0.0, 1.0), counts=(1,), underflow=0, overflow=0)
    b = Histogram(edges=(0.0, 2.0), counts=(1,), underflow=0, overflow=0)
    assert (a + a).counts == (2,)
    with pytest.raises(RejectedInputException):
        a + b


def test_validate_histogram():
    assert validate_histogram(10, (-1, 1)) == (-1.0, 1.0)
    for bins, value_range in ((0, (-1, 1)), (True, (-1, 1)), (5, (1, 1)), (5, (2, -2))):
        with pytest.raises(RejectedInputException):
            validate_histogram(bins, value_range)


def test_run_trial():
    spec = gen_spec(n=32, regime="iid")
    record = run_trial(spec, 4)
    assert record.seed == 4
    assert record.n == 32
    assert record.regime == "iid"
    assert len(record.moments) == TRIAL_MOMENTS
    assert record.moments[1] == pytest.approx(empirical_moment(record.sample, 2))
    assert 0 <= record.ks <= 1


def test_run_trials_is_deterministic():
    spec = gen_spec(n=16, regime="constant_c2", c="1/2")
    first = run_trials(spec, 4, seed=9)
    assert [r.seed for r in first] == trial_seeds(9, 4)
    assert len(set(trial_seeds(9, 4))) == 4
    assert run_trials(spec, 4, seed=9) == first
    assert run_trials(spec, 4, seed=9, workers=2) == first
    assert run_trials(spec, 4, seed=10) != first


def test_run_trials_rejects_bad_trials():
    for trials in (0, -1, 2.5):
        with pytest.raises(RejectedInputException):
            run_trials(gen_spec(n=4, regime="iid"), trials, seed=0)


def test_moment_report():
    records = [gen_record([0.0, 1.0 + d, 0.0, 2.0 + d]) for d in (-0.01, 0.0, 0.01)]
    report = moment_report(records, {2: frac("1"), 4: frac("2")})
    assert report.passed
    assert report.regime == "iid"
    assert [row.k for row in report.rows] == [2, 4]
    assert report.rows[0].trials == 3
    assert report.rows[0].mean == pytest.approx(1.0)

    report = moment_report(records, {4: frac("29/12")}, regime="hankel")
    assert report.regime == "hankel"
    assert not report.passed
    assert report.rows[0].deviation == pytest.approx(2.0 - 29 / 12)


def test_moment_report_rejects_bad_input():
    with pytest.raises(EmptySimulationException):
        moment_report([], {2: frac("1")})
    with pytest.raises(RejectedInputException):
        moment_report([gen_record([0.0, 1.0], n=8), gen_record([0.0, 1.0], n=16)], {2: frac("1")})
    with pytest.raises(RejectedInputException):
        moment_report([gen_record([0.0, 1.0])], {9: frac("1")})
