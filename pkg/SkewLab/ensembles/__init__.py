import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from SkewLab.constants.ensembles import (
    RADEMACHER_REGIMES,
    SEMICIRCLE_REGIMES,
    EntryDistributions,
    Regimes,
)
from SkewLab.ensembles.generators import REGIME_GENERATORS
from SkewLab.exceptions import RejectedInputException
from SkewLab.utils.formatters import parse_rational, rational_str
from SkewLab.utils.logging import log
from SkewLab.utils.seeds import derive_seed, rng_for

REGIME_REGEX = re.compile(r"^\s*([a-z0-9_]+)\s*(?:\(\s*([^)]*?)\s*\))?\s*$")

# Fewest independent samples accepted by validate_covariance
MIN_COVARIANCE_TRIALS = 30


@dataclass(frozen=True)
class EnsembleSpec:
    """
    A law for n x n symmetric matrices X = a / sqrt(n) whose skew-diagonals p + q = r are
    independent. rho is used by weak_c1 only and c by constant_c2 only.
    """

    n: int
    regime: Regimes
    rho: Optional[float] = None
    c: Optional[Fraction] = None
    entry_dist: EntryDistributions = EntryDistributions.GAUSSIAN

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise RejectedInputException("n must be a positive integer, got {!r}".format(self.n))
        try:
            object.__setattr__(self, "regime", Regimes(self.regime))
            object.__setattr__(self, "entry_dist", EntryDistributions(self.entry_dist))
        except ValueError as e:
            raise RejectedInputException(str(e))

        if self.regime == Regimes.WEAK_C1:
            if self.rho is None:
                raise RejectedInputException("weak_c1 needs rho")
            rho = float(self.rho)
            if not 0 <= rho < 1:
                raise RejectedInputException("rho must lie in [0,1), got {}".format(rho))
            object.__setattr__(self, "rho", rho)
        elif self.rho is not None:
            raise RejectedInputException("rho only applies to weak_c1")

        if self.regime == Regimes.CONSTANT_C2:
            if self.c is None:
                raise RejectedInputException("constant_c2 needs c")
            c = parse_rational(self.c)
            if not 0 <= c <= 1:
                raise RejectedInputException("c must lie in [0,1], got {}".format(rational_str(c)))
            object.__setattr__(self, "c", c)
        elif self.c is not None:
            raise RejectedInputException("c only applies to constant_c2")

        if (
            self.entry_dist == EntryDistributions.RADEMACHER
            and self.regime not in RADEMACHER_REGIMES
        ):
            raise RejectedInputException(
                "rademacher entries are only available for {}".format(
                    ", ".join(str(r) for r in RADEMACHER_REGIMES)
                )
            )

    @classmethod
    def parse(cls, label, n, entry_dist=EntryDistributions.GAUSSIAN):
        """Build a spec from a regime label such as "constant_c2(1/2)" or "weak_c1(0.5)"."""
        match = REGIME_REGEX.match(label or "")
        if match is None or not Regimes.test(match.group(1)):
            raise RejectedInputException("Unknown regime {!r}".format(label))
        regime, argument = Regimes(match.group(1)), match.group(2)
        if regime == Regimes.WEAK_C1:
            return cls(n=n, regime=regime, rho=float(parse_rational(argument)), entry_dist=entry_dist)
        if regime == Regimes.CONSTANT_C2:
            return cls(n=n, regime=regime, c=parse_rational(argument), entry_dist=entry_dist)
        if argument:
            raise RejectedInputException("{} takes no parameter".format(regime))
        return cls(n=n, regime=regime, entry_dist=entry_dist)

    @property
    def label(self):
        if self.regime == Regimes.WEAK_C1:
            return "{}({!r})".format(self.regime, self.rho)
        if self.regime == Regimes.CONSTANT_C2:
            return "{}({})".format(self.regime, rational_str(self.c))
        return str(self.regime)

    @property
    def limit_correlation(self) -> Fraction:
        """The c of the limiting moments M_k(c); weak correlations behave like c = 0."""
        if self.regime in SEMICIRCLE_REGIMES:
            return Fraction(0)
        if self.regime == Regimes.HANKEL:
            return Fraction(1)
        return self.c

    def with_size(self, n):
        return EnsembleSpec(
            n=n, regime=self.regime, rho=self.rho, c=self.c, entry_dist=self.entry_dist
        )


@dataclass(frozen=True, eq=False)
class SymmetricMatrix:
    n: int
    entries: np.ndarray = field(repr=False)
    spec: Optional[EnsembleSpec] = None
    seed: Optional[int] = None

    @classmethod
    def from_array(cls, array, spec=None, seed=None):
        entries = np.array(array, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise RejectedInputException("Expected a square matrix, got shape {}".format(entries.shape))
        if not np.all(np.isfinite(entries)):
            raise RejectedInputException("Matrix entries must be finite")
        if not np.array_equal(entries, entries.T):
            raise RejectedInputException("Matrix is not exactly symmetric")
        entries.setflags(write=False)
        return cls(n=entries.shape[0], entries=entries, spec=spec, seed=seed)


@dataclass(frozen=True)
class CovarianceCheck:
    statistic: str
    lag: int
    target: float
    estimate: float
    stderr: float

    @property
    def flagged(self):
        return abs(self.estimate - self.target) > 4 * self.stderr + 1e-12


@dataclass(frozen=True)
class CovarianceReport:
    spec: EnsembleSpec
    trials: int
    checks: Tuple[CovarianceCheck, ...]

    @property
    def passed(self):
        return not any(check.flagged for check in self.checks)


def skew_diagonal_positions(n, r) -> Tuple[np.ndarray, np.ndarray]:
    """1-based (p, q) with p <= q and p + q = r, ordered by p."""
    p = np.arange(max(1, r - n), r // 2 + 1)
    return p, r - p


def skew_diagonals(spec: EnsembleSpec, seed) -> List[np.ndarray]:
    """
    Unscaled free entries of every skew-diagonal r = 2..2n. Diagonal r draws from
    rng_for(seed, n, r), so each one can be generated on its own.
    """
    generate = REGIME_GENERATORS[spec.regime]
    diagonals = []
    for r in range(2, 2 * spec.n + 1):
        p, _ = skew_diagonal_positions(spec.n, r)
        diagonals.append(np.asarray(generate(rng_for(seed, spec.n, r), len(p), spec), dtype=float))
    return diagonals


def sample_matrix(spec: EnsembleSpec, seed) -> SymmetricMatrix:
    n = spec.n
    upper = np.zeros((n, n))
    for r, values in enumerate(skew_diagonals(spec, seed), start=2):
        p, q = skew_diagonal_positions(n, r)
        upper[p - 1, q - 1] = values
    upper /= math.sqrt(n)
    # mirror by copying, so X[q, p] is bitwise X[p, q]
    entries = upper + np.triu(upper, 1).T
    return SymmetricMatrix.from_array(entries, spec=spec, seed=int(seed))


def target_covariance(spec: EnsembleSpec, lag) -> float:
    """Model covariance of two unscaled entries of one skew-diagonal, lag positions apart."""
    if lag == 0:
        return 1.0
    if spec.regime == Regimes.WEAK_C1:
        return spec.rho**lag
    if spec.regime == Regimes.CONSTANT_C2:
        return float(spec.c)
    if spec.regime == Regimes.HANKEL:
        return 1.0
    return 0.0


def _trial_statistics(diagonals, max_lag):
    entries = np.concatenate(diagonals)
    row = [float(np.mean(entries)), float(np.mean(entries**2))]
    for lag in range(1, max_lag + 1):
        products = [d[:-lag] * d[lag:] for d in diagonals if len(d) > lag]
        row.append(float(np.mean(np.concatenate(products))))
    row.append(float(np.mean([a[0] * b[0] for a, b in zip(diagonals, diagonals[1:])])))
    return row


def validate_covariance(spec: EnsembleSpec, trials, seed, max_lag=2) -> CovarianceReport:
    """
    Per-trial averages of the unscaled entries, then their mean and standard error across
    trials. Each statistic is flagged when it sits more than 4 standard errors from its target.
    """
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < MIN_COVARIANCE_TRIALS:
        raise RejectedInputException(
            "validate_covariance needs at least {} trials, got {!r}".format(
                MIN_COVARIANCE_TRIALS, trials
            )
        )
    if (spec.n + 1) // 2 <= max_lag:
        raise RejectedInputException("n = {} is too small for lag {}".format(spec.n, max_lag))

    table = np.array(
        [
            _trial_statistics(skew_diagonals(spec, derive_seed(seed, trial)), max_lag)
            for trial in range(trials)
        ]
    )
    estimates = table.mean(axis=0)
    stderrs = table.std(axis=0, ddof=1) / math.sqrt(trials)

    names = ["mean", "variance"] + ["covariance"] * max_lag + ["cross_diagonal"]
    lags = [0, 0] + list(range(1, max_lag + 1)) + [0]
    targets = [0.0, 1.0] + [target_covariance(spec, lag) for lag in range(1, max_lag + 1)] + [0.0]

    report = CovarianceReport(
        spec=spec,
        trials=trials,
        checks=tuple(
            CovarianceCheck(
                statistic=name,
                lag=lag,
                target=target,
                estimate=float(estimate),
                stderr=float(stderr),
            )
            for name, lag, target, estimate, stderr in zip(names, lags, targets, estimates, stderrs)
        ),
    )
    log(
        "simulations",
        "[{date}] covariance of {label}, n = {n}, {trials} trials: {outcome}",
        label=spec.label,
        n=spec.n,
        trials=trials,
        outcome="passed" if report.passed else "flagged",
    )
    return report
