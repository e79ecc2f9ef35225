import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import scipy.stats

from SkewLab.ensembles import EnsembleSpec, sample_matrix
from SkewLab.exceptions import RejectedInputException
from SkewLab.spectra import eigenvalues
from SkewLab.utils.logging import log
from SkewLab.utils.seeds import derive_seed, rng_for

# Fewest trials per matrix size accepted by the concentration diagnostic
MIN_CONCENTRATION_TRIALS = 50

# A log-log slope this many standard errors above zero counts as growth
GROWTH_Z = 3.0

# Key separating the bootstrap stream from the matrix seeds derived for the same size
BOOTSTRAP_STREAM = 1


@dataclass(frozen=True)
class ConcentrationRow:
    n: int
    k: int
    fourth_central_moment: float
    ratio_to_n2: float
    ratio_stderr: float


@dataclass(frozen=True)
class ConcentrationTable:
    regime: str
    k: int
    trials: int
    rows: Tuple[ConcentrationRow, ...]
    slope: float
    slope_stderr: float

    @property
    def bounded(self):
        if math.isnan(self.slope):
            return False
        return self.slope - GROWTH_Z * self.slope_stderr <= 0


def fourth_central_moment(values, axis=-1):
    centered = values - np.mean(values, axis=axis, keepdims=True)
    return np.mean(centered**4, axis=axis)


def trace_power(spec: EnsembleSpec, k, seed) -> float:
    sample = eigenvalues(sample_matrix(spec, seed))
    return math.fsum(sample.eigenvalues**k)


def growth_slope(sizes, ratios, stderrs):
    """
    Weighted least-squares slope of log ratio against log n, each point weighted by its
    bootstrap precision on the log scale. NaN when some ratio or error is zero or fewer
    than two distinct sizes are given.
    """
    sizes, ratios, stderrs = (np.asarray(a, dtype=float) for a in (sizes, ratios, stderrs))
    if len(set(sizes.tolist())) < 2 or np.any(ratios <= 0) or np.any(stderrs <= 0):
        return float("nan"), float("nan")
    x = np.log(sizes)
    y = np.log(ratios)
    weights = (ratios / stderrs) ** 2
    x_bar = np.average(x, weights=weights)
    y_bar = np.average(y, weights=weights)
    spread = float(np.sum(weights * (x - x_bar) ** 2))
    slope = float(np.sum(weights * (x - x_bar) * (y - y_bar)) / spread)
    return slope, 1.0 / math.sqrt(spread)


def concentration_statistic(
    spec: EnsembleSpec, k, n_list: Sequence[int], trials, seed, resamples=200
) -> ConcentrationTable:
    """
    For every n, the empirical fourth central moment of tr X^k across trials and its ratio
    to n^2, with a bootstrap standard error for the ratio. The table is bounded unless the
    ratios grow along n by more than GROWTH_Z standard errors of the fitted slope, and a
    slope that cannot be fitted never counts as bounded.
    """
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < MIN_CONCENTRATION_TRIALS:
        raise RejectedInputException(
            "concentration needs at least {} trials, got {!r}".format(
                MIN_CONCENTRATION_TRIALS, trials
            )
        )
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise RejectedInputException("k must be a positive integer, got {!r}".format(k))
    if len(set(n_list)) != len(n_list):
        raise RejectedInputException("n_list repeats a matrix size: {!r}".format(list(n_list)))
    if len(n_list) < 2:
        raise RejectedInputException(
            "n_list must name at least two distinct matrix sizes, got {!r}".format(list(n_list))
        )

    rows = []
    for n in n_list:
        sized = spec.with_size(int(n))
        traces = np.array(
            [trace_power(sized, k, derive_seed(seed, n, trial)) for trial in range(trials)]
        )
        fourth = float(fourth_central_moment(traces))
        result = scipy.stats.bootstrap(
            (traces,),
            lambda values, axis: fourth_central_moment(values, axis=axis) / n**2,
            n_resamples=resamples,
            vectorized=True,
            method="percentile",
            random_state=rng_for(seed, n, BOOTSTRAP_STREAM),
        )
        rows.append(
            ConcentrationRow(
                n=int(n),
                k=k,
                fourth_central_moment=fourth,
                ratio_to_n2=fourth / n**2,
                ratio_stderr=float(result.standard_error),
            )
        )

    slope, slope_stderr = growth_slope(
        [row.n for row in rows], [row.ratio_to_n2 for row in rows], [row.ratio_stderr for row in rows]
    )
    table = ConcentrationTable(
        regime=spec.label,
        k=k,
        trials=trials,
        rows=tuple(rows),
        slope=slope,
        slope_stderr=slope_stderr,
    )
    log(
        "simulations",
        "[{date}] concentration of tr X^{k} for {regime}: slope {slope:.3f} +- {stderr:.3f}",
        k=k,
        regime=spec.label,
        slope=slope,
        stderr=slope_stderr,
    )
    return table
