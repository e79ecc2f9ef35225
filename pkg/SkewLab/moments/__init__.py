import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

import sympy

from SkewLab.constants.volumes import VolumeClosures, VolumeMethods
from SkewLab.exceptions import RejectedInputException
from SkewLab.partitions import enumerate_pair_partitions, height
from SkewLab.utils.formatters import parse_rational, rational_str
from SkewLab.utils.logging import log
from SkewLab.utils.seeds import derive_seed
from SkewLab.volumes import compute_hankel_volume
from SkewLab.volumes.polytope import to_sympy

C = sympy.Symbol("c")


@dataclass(frozen=True)
class MomentEstimate:
    value: float
    stderr: float

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class MomentSequence:
    """
    Moments m_1..m_kmax, one entry per order. label names the source measure, either
    "semicircle" or the correlation parameter c as "p/q".
    """

    values: Tuple[Union[Fraction, MomentEstimate], ...]
    label: str

    @property
    def kmax(self):
        return len(self.values)

    def __getitem__(self, k):
        if k < 1 or k > self.kmax:
            raise KeyError(k)
        return self.values[k - 1]

    def items(self):
        return [(k, self[k]) for k in range(1, self.kmax + 1)]


def validate_order(k, name="k"):
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise RejectedInputException("{} must be a positive integer, got {!r}".format(name, k))
    return k


def validate_correlation(c) -> Fraction:
    c = parse_rational(c)
    if not 0 <= c <= 1:
        raise RejectedInputException("c must lie in [0,1], got {}".format(rational_str(c)))
    return c


def catalan(m) -> int:
    if isinstance(m, bool) or not isinstance(m, int) or m < 0:
        raise RejectedInputException("m must be a nonnegative integer, got {!r}".format(m))
    return math.comb(2 * m, m) // (m + 1)


def semicircle_moment(k) -> Fraction:
    validate_order(k)
    if k % 2:
        return Fraction(0)
    return Fraction(catalan(k // 2))


def _partition_volume(job):
    p, method, samples, seed, closure = job
    return compute_hankel_volume(p, method=method, samples=samples, seed=seed, closure=closure)


def limit_moment(
    k,
    c,
    method=VolumeMethods.EXACT,
    samples: Optional[int] = None,
    seed=0,
    closure=VolumeClosures.OPEN,
    workers=1,
) -> Union[Fraction, MomentEstimate]:
    """
    M_k(c) = sum over pair partitions p of {1..k} of c^(k/2 - h(p)) * p_H(p), with 0^0 = 1.

    Exact volumes give an exact Fraction. Monte Carlo volumes give a MomentEstimate whose
    error combines the per-partition standard errors, each partition using its own seed.
    With workers > 1 the partition volumes are computed on a process pool; the result is
    the same either way.
    """
    validate_order(k)
    c = validate_correlation(c)
    method = VolumeMethods(method)
    closure = VolumeClosures(closure)
    exact = method == VolumeMethods.EXACT

    if k % 2:
        return Fraction(0) if exact else MomentEstimate(value=0.0, stderr=0.0)

    weights = []
    jobs = []
    for index, p in enumerate(enumerate_pair_partitions(k)):
        weight = c ** (k // 2 - height(p))
        if weight == 0:
            continue
        weights.append(weight)
        jobs.append((p, method, samples, derive_seed(seed, k, index), closure))

    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            estimates = list(pool.map(_partition_volume, jobs))
    else:
        estimates = [_partition_volume(job) for job in jobs]

    total = Fraction(0)
    variance = 0.0
    for weight, estimate in zip(weights, estimates):
        if exact:
            total += weight * estimate.value
        else:
            total += weight * Fraction(estimate.value)
            variance += float(weight) ** 2 * estimate.stderr ** 2

    if exact:
        value = total
    else:
        value = MomentEstimate(value=float(total), stderr=math.sqrt(variance))

    log(
        "theory",
        "[{date}] M_{k}({c}) = {value} ({method}, {closure})",
        k=k,
        c=rational_str(c),
        value=rational_str(value) if exact else "{:.6f} +- {:.6f}".format(value.value, value.stderr),
        method=method,
        closure=closure,
    )
    return value


def gamma_h_moment(k, closure=VolumeClosures.OPEN) -> Fraction:
    return limit_moment(k, 1, closure=closure)


def limit_moment_polynomial(k, closure=VolumeClosures.OPEN) -> sympy.Poly:
    """M_k as an exact polynomial in c; the coefficient of c^e sums p_H over h(p) = k/2 - e."""
    validate_order(k)
    closure = VolumeClosures(closure)
    if k % 2:
        return sympy.Poly(0, C, domain="QQ")

    coefficients = defaultdict(Fraction)
    for p in enumerate_pair_partitions(k):
        coefficients[k // 2 - height(p)] += compute_hankel_volume(p, closure=closure).value
    expression = sum(to_sympy(value) * C ** exponent for exponent, value in coefficients.items())
    return sympy.Poly(expression, C, domain="QQ")


def moment_sequence(values, label) -> MomentSequence:
    return MomentSequence(values=tuple(values), label=str(label))


def semicircle_sequence(kmax) -> MomentSequence:
    validate_order(kmax, name="kmax")
    return moment_sequence(
        [semicircle_moment(k) for k in range(1, kmax + 1)], label="semicircle"
    )


def limit_moment_sequence(c, kmax, closure=VolumeClosures.OPEN, workers=1) -> MomentSequence:
    validate_order(kmax, name="kmax")
    c = validate_correlation(c)
    return moment_sequence(
        [limit_moment(k, c, closure=closure, workers=workers) for k in range(1, kmax + 1)],
        label=rational_str(c),
    )


def gamma_h_sequence(kmax, closure=VolumeClosures.OPEN) -> MomentSequence:
    return limit_moment_sequence(1, kmax, closure=closure)


def growth_profile(c, kmax, closure=VolumeClosures.OPEN) -> Dict[int, float]:
    """
    M_{2j}(c)^(1/j) for every even order 2j <= kmax. Growth along the orders is what an
    unbounded support looks like; the profile only records it.
    """
    sequence = limit_moment_sequence(c, kmax, closure=closure)
    return {
        k: float(sequence[k]) ** (2.0 / k) for k in range(2, sequence.kmax + 1, 2)
    }
