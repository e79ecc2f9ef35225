import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.stats

from SkewLab.ensembles import EnsembleSpec, SymmetricMatrix, sample_matrix
from SkewLab.exceptions import (
    EmptySimulationException,
    RejectedInputException,
    SolverConvergenceException,
)
from SkewLab.utils.logging import log
from SkewLab.utils.seeds import derive_seed

# Empirical moments m1..m8 are recorded for every trial
TRIAL_MOMENTS = 8

DEFAULT_HISTOGRAM_BINS = 60
DEFAULT_HISTOGRAM_RANGE = (-3.0, 3.0)


@dataclass(frozen=True, eq=False)
class SpectralSample:
    eigenvalues: np.ndarray = field(repr=False)
    spec: Optional[EnsembleSpec] = None
    seed: Optional[int] = None

    @property
    def n(self):
        return len(self.eigenvalues)


@dataclass(frozen=True)
class Histogram:
    edges: Tuple[float, ...]
    counts: Tuple[int, ...]
    underflow: int
    overflow: int

    @property
    def total(self):
        return sum(self.counts) + self.underflow + self.overflow

    def bins(self):
        return list(zip(self.edges[:-1], self.edges[1:], self.counts))

    def __add__(self, other):
        if self.edges != other.edges:
            raise RejectedInputException("Histograms with different bins cannot be pooled")
        return Histogram(
            edges=self.edges,
            counts=tuple(a + b for a, b in zip(self.counts, other.counts)),
            underflow=self.underflow + other.underflow,
            overflow=self.overflow + other.overflow,
        )


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    n: int
    regime: str
    moments: Tuple[float, ...]
    ks: float
    sample: Optional[SpectralSample] = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class MomentRow:
    k: int
    theoretical: Fraction
    mean: float
    stderr: float
    trials: int
    n: int

    @property
    def deviation(self):
        return self.mean - float(self.theoretical)

    @property
    def flagged(self):
        return abs(self.deviation) > 4 * self.stderr


@dataclass(frozen=True)
class MomentReport:
    regime: str
    rows: Tuple[MomentRow, ...]

    @property
    def passed(self):
        return not any(row.flagged for row in self.rows)


def eigenvalues(m: SymmetricMatrix) -> SpectralSample:
    """
    Ascending eigenvalues of a symmetric matrix.

    The trace and the squared Frobenius norm are checked against the eigenvalues; a failed
    check is reported like a solver failure, with the seed of the matrix.
    """
    try:
        values = scipy.linalg.eigvalsh(m.entries)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SolverConvergenceException("Eigensolver failed: {}".format(e), seed=m.seed)
    values = np.sort(values)

    scale = float(np.max(np.abs(m.entries))) if m.n else 0.0
    tolerance = 1e-8 * m.n * scale
    trace_residual = abs(math.fsum(values) - math.fsum(np.diag(m.entries)))
    if trace_residual > tolerance:
        raise SolverConvergenceException(
            "Eigenvalues miss the trace by {:.3e}".format(trace_residual), seed=m.seed
        )
    frobenius = math.fsum((m.entries**2).ravel())
    frobenius_residual = abs(math.fsum(values**2) - frobenius)
    if frobenius_residual > tolerance * max(1.0, math.sqrt(frobenius)):
        raise SolverConvergenceException(
            "Eigenvalues miss the Frobenius norm by {:.3e}".format(frobenius_residual),
            seed=m.seed,
        )

    values.setflags(write=False)
    return SpectralSample(eigenvalues=values, spec=m.spec, seed=m.seed)


def empirical_moment(s: SpectralSample, k) -> float:
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise RejectedInputException("k must be a positive integer, got {!r}".format(k))
    return math.fsum(s.eigenvalues**k) / s.n


def validate_histogram(bins, value_range):
    lo, hi = value_range
    if isinstance(bins, bool) or not isinstance(bins, int) or bins < 1:
        raise RejectedInputException("bins must be a positive integer, got {!r}".format(bins))
    if not lo < hi:
        raise RejectedInputException("Histogram range needs lo < hi, got [{}, {}]".format(lo, hi))
    return float(lo), float(hi)


def esd_histogram(
    s: SpectralSample, bins=DEFAULT_HISTOGRAM_BINS, value_range=DEFAULT_HISTOGRAM_RANGE
) -> Histogram:
    lo, hi = validate_histogram(bins, value_range)
    counts, edges = np.histogram(s.eigenvalues, bins=bins, range=(lo, hi))
    return Histogram(
        edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        underflow=int(np.count_nonzero(s.eigenvalues < lo)),
        overflow=int(np.count_nonzero(s.eigenvalues > hi)),
    )


def pooled_histogram(
    samples: Sequence[SpectralSample],
    bins=DEFAULT_HISTOGRAM_BINS,
    value_range=DEFAULT_HISTOGRAM_RANGE,
) -> Histogram:
    lo, hi = validate_histogram(bins, value_range)
    pooled = Histogram(
        edges=tuple(float(e) for e in np.linspace(lo, hi, bins + 1)),
        counts=(0,) * bins,
        underflow=0,
        overflow=0,
    )
    for s in samples:
        pooled = pooled + esd_histogram(s, bins=bins, value_range=(lo, hi))
    return pooled


def semicircle_cdf(x):
    """Distribution function of the density sqrt(4 - x^2) / (2 pi) on [-2, 2]."""
    t = np.clip(np.asarray(x, dtype=float), -2.0, 2.0)
    value = 0.5 + t * np.sqrt(4.0 - t**2) / (4.0 * np.pi) + np.arcsin(t / 2.0) / np.pi
    value = np.clip(value, 0.0, 1.0)
    return float(value) if value.ndim == 0 else value


def ks_distance_to_semicircle(s: SpectralSample) -> float:
    return float(scipy.stats.kstest(s.eigenvalues, semicircle_cdf).statistic)


def run_trial(spec: EnsembleSpec, seed) -> TrialRecord:
    sample = eigenvalues(sample_matrix(spec, seed))
    return TrialRecord(
        seed=int(seed),
        n=spec.n,
        regime=spec.label,
        moments=tuple(empirical_moment(sample, k) for k in range(1, TRIAL_MOMENTS + 1)),
        ks=ks_distance_to_semicircle(sample),
        sample=sample,
    )


def trial_seeds(seed, trials) -> List[int]:
    return [derive_seed(seed, index) for index in range(trials)]


def run_trials(spec: EnsembleSpec, trials, seed, workers=1) -> List[TrialRecord]:
    """
    Independent trials with seeds derived from the master seed. Records come back in trial
    order whether they ran in-process or on a process pool.
    """
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
        raise RejectedInputException("trials must be a positive integer, got {!r}".format(trials))
    seeds = trial_seeds(seed, trials)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_trial, [spec] * trials, seeds))
    else:
        records = [run_trial(spec, s) for s in seeds]

    log(
        "simulations",
        "[{date}] {trials} trials of {label}, n = {n}, seed = {seed}, mean ks = {ks:.4f}",
        trials=trials,
        label=spec.label,
        n=spec.n,
        seed=seed,
        ks=math.fsum(r.ks for r in records) / trials,
    )
    return records


def moment_report(
    records: Sequence[TrialRecord], theory: Dict[int, Fraction], regime=None
) -> MomentReport:
    """Empirical moment means against theory, flagged beyond 4 standard errors."""
    if not records:
        raise EmptySimulationException("No trials to compare")
    sizes = {r.n for r in records}
    if len(sizes) != 1:
        raise RejectedInputException("Trials mix matrix sizes {}".format(sorted(sizes)))

    trials = len(records)
    rows = []
    for k in sorted(theory):
        if k < 1 or k > len(records[0].moments):
            raise RejectedInputException("No empirical moment of order {}".format(k))
        values = np.array([r.moments[k - 1] for r in records])
        stderr = float(np.std(values, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
        rows.append(
            MomentRow(
                k=k,
                theoretical=theory[k],
                mean=math.fsum(values) / trials,
                stderr=stderr,
                trials=trials,
                n=records[0].n,
            )
        )

    report = MomentReport(regime=regime or records[0].regime, rows=tuple(rows))
    log(
        "simulations",
        "[{date}] compared {trials} trials of {regime} against theory: {flagged} flagged",
        trials=trials,
        regime=report.regime,
        flagged=sum(1 for row in rows if row.flagged),
    )
    return report
