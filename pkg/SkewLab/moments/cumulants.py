from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from SkewLab.constants.volumes import VolumeClosures
from SkewLab.exceptions import RejectedInputException
from SkewLab.moments import (
    MomentSequence,
    gamma_h_sequence,
    limit_moment_sequence,
    moment_sequence,
    semicircle_sequence,
    validate_correlation,
)
from SkewLab.partitions import noncrossing_block_types
from SkewLab.utils.formatters import rational_str
from SkewLab.utils.logging import log


@dataclass(frozen=True)
class CumulantSequence:
    values: Tuple[Fraction, ...]

    @property
    def nmax(self):
        return len(self.values)

    def __getitem__(self, n):
        if n < 1 or n > self.nmax:
            raise KeyError(n)
        return self.values[n - 1]


@dataclass(frozen=True)
class OrderCheck:
    order: int
    lhs: Fraction
    rhs: Fraction

    @property
    def passed(self):
        return self.lhs == self.rhs


@dataclass(frozen=True)
class FreeConvolutionReport:
    c: Fraction
    kmax: int
    closure: VolumeClosures
    orders: Tuple[OrderCheck, ...]

    @property
    def passed(self):
        return all(check.passed for check in self.orders)


def _exact(value):
    if not isinstance(value, (int, Fraction)):
        raise RejectedInputException(
            "Free cumulants need exact moments, got {!r}".format(value)
        )
    return Fraction(value)


def moments_to_free_cumulants(m: MomentSequence) -> CumulantSequence:
    """
    Invert m_n = sum over non-crossing partitions s of {1..n} of prod_{B in s} kappa_|B|.

    The one-block partition contributes kappa_n itself, so kappa_n is m_n minus the terms of
    every other partition, whose blocks are all smaller than n.
    """
    kappa = []
    for n in range(1, m.kmax + 1):
        rest = Fraction(0)
        for sizes, count in noncrossing_block_types(n).items():
            if sizes == (n,):
                continue
            term = Fraction(count)
            for size in sizes:
                term *= kappa[size - 1]
            rest += term
        kappa.append(_exact(m[n]) - rest)
    return CumulantSequence(values=tuple(kappa))


def free_cumulants_to_moments(kappa: CumulantSequence, label="cumulants") -> MomentSequence:
    moments = []
    for n in range(1, kappa.nmax + 1):
        total = Fraction(0)
        for sizes, count in noncrossing_block_types(n).items():
            term = Fraction(count)
            for size in sizes:
                term *= kappa[size]
            total += term
        moments.append(total)
    return moment_sequence(moments, label=label)


def check_free_convolution(c, kmax=8, closure=VolumeClosures.CYCLIC) -> FreeConvolutionReport:
    """
    Compare kappa_2j(nu_c) with (1-c)^j kappa_2j(mu) + c^j kappa_2j(gamma_H) for every even
    order 2j <= kmax, mu being the standard semicircle.
    """
    c = validate_correlation(c)
    closure = VolumeClosures(closure)
    if isinstance(kmax, bool) or not isinstance(kmax, int) or kmax < 2 or kmax % 2:
        raise RejectedInputException("kmax must be a positive even integer, got {!r}".format(kmax))

    nu = moments_to_free_cumulants(limit_moment_sequence(c, kmax, closure=closure))
    gamma = moments_to_free_cumulants(gamma_h_sequence(kmax, closure=closure))
    mu = moments_to_free_cumulants(semicircle_sequence(kmax))

    checks: List[OrderCheck] = []
    for order in range(2, kmax + 1, 2):
        j = order // 2
        checks.append(
            OrderCheck(
                order=order,
                lhs=nu[order],
                rhs=(1 - c) ** j * mu[order] + c ** j * gamma[order],
            )
        )

    report = FreeConvolutionReport(c=c, kmax=kmax, closure=closure, orders=tuple(checks))
    log(
        "theory",
        "[{date}] free convolution at c = {c}, kmax = {kmax} ({closure}): {outcome}",
        c=rational_str(c),
        kmax=kmax,
        closure=closure,
        outcome="passed" if report.passed else "failed",
    )
    return report
