import math

import numpy as np
from scipy.signal import lfilter

from SkewLab.constants.ensembles import EntryDistributions, Regimes


def draw(rng, size, entry_dist):
    if entry_dist == EntryDistributions.RADEMACHER:
        return 2.0 * rng.integers(0, 2, size=size) - 1.0
    return rng.standard_normal(size)


def weak_c1(rng, size, spec):
    # Stationary AR(1) along the skew-diagonal: Cov(a_p, a_p') = rho^|p - p'|
    rho = float(spec.rho)
    xi = rng.standard_normal(size)
    shocks = math.sqrt(1.0 - rho**2) * xi
    shocks[0] = xi[0]
    return lfilter([1.0], [1.0, -rho], shocks)


def constant_c2(rng, size, spec):
    c = float(spec.c)
    shared = rng.standard_normal()
    own = rng.standard_normal(size)
    return math.sqrt(c) * shared + math.sqrt(1.0 - c) * own


def hankel(rng, size, spec):
    return np.full(size, draw(rng, 1, spec.entry_dist)[0])


def iid(rng, size, spec):
    return draw(rng, size, spec.entry_dist)


REGIME_GENERATORS = {
    Regimes.WEAK_C1: weak_c1,
    Regimes.CONSTANT_C2: constant_c2,
    Regimes.HANKEL: hankel,
    Regimes.IID: iid,
}
