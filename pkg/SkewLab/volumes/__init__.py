import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from SkewLab.constants.volumes import (
    DEFAULT_MC_SAMPLES,
    MAX_EXACT_DIMENSION,
    MAX_SEQUENCE_K,
    MAX_SEQUENCE_POINTS,
    MC_CHUNK_SIZE,
    VolumeClosures,
    VolumeMethods,
)
from SkewLab.exceptions import RejectedInputException, UnsupportedDimensionException
from SkewLab.partitions import PairPartition
from SkewLab.utils.formatters import rational_str
from SkewLab.utils.logging import log
from SkewLab.utils.seeds import rng_for
from SkewLab.volumes.polytope import cube_section_volume


@dataclass(frozen=True)
class AffineForm:
    """constant + sum(coefficients[i] * x_{free_vars[i]})"""

    coefficients: Tuple[int, ...]
    constant: int = 0

    def evaluate(self, values: Sequence) -> Union[Fraction, float]:
        return self.constant + sum(a * v for a, v in zip(self.coefficients, values))

    def is_zero(self):
        return self.constant == 0 and not any(self.coefficients)

    def __sub__(self, other):
        return AffineForm(
            coefficients=tuple(a - b for a, b in zip(self.coefficients, other.coefficients)),
            constant=self.constant - other.constant,
        )


@dataclass(frozen=True)
class AffineSystem:
    k: int
    free_vars: Tuple[int, ...]
    solved: Tuple[Tuple[int, AffineForm], ...]
    closure: VolumeClosures = VolumeClosures.OPEN

    @property
    def dimension(self):
        return len(self.free_vars)

    @property
    def forms(self) -> Tuple[AffineForm, ...]:
        return tuple(form for _, form in self.solved)

    def variable(self, index) -> AffineForm:
        """x_index as a form over the free variables."""
        for j, form in self.solved:
            if j == index:
                return form
        position = self.free_vars.index(index)
        return AffineForm(
            coefficients=tuple(int(i == position) for i in range(self.dimension))
        )

    def solve(self, values: Sequence) -> Dict[int, Union[Fraction, float]]:
        """All of x_0..x_k for the given free values."""
        x = dict(zip(self.free_vars, values))
        for j, form in self.solved:
            x[j] = form.evaluate(values)
        return x

    def closure_form(self) -> AffineForm:
        return self.variable(self.k) - self.variable(0)

    @property
    def collapses(self):
        """Whether the cyclic identification x_k = x_0 leaves a zero-volume section."""
        return self.closure == VolumeClosures.CYCLIC and not self.closure_form().is_zero()


@dataclass(frozen=True)
class VolumeEstimate:
    value: Union[Fraction, float]
    stderr: float
    samples: int
    method: VolumeMethods

    @property
    def exact(self):
        return self.method == VolumeMethods.EXACT

    def __str__(self):
        if self.exact:
            return rational_str(self.value)
        return "{:.6f} +- {:.6f}".format(self.value, self.stderr)


def build_affine_system(p: PairPartition, closure=VolumeClosures.OPEN) -> AffineSystem:
    """
    Solve x_i + x_{i-1} = x_j + x_{j-1} for the larger index j of every block {i, j}.

    Blocks are taken in increasing order of j and each x_j := x_i + x_{i-1} - x_{j-1} has the
    earlier solutions substituted, so every form ends up over the free variables only.
    """
    closure = VolumeClosures(closure)
    larger = {j for _, j in p.blocks}
    free_vars = tuple(v for v in range(p.k + 1) if v not in larger)
    position = {v: index for index, v in enumerate(free_vars)}
    expressions = {}

    def expression(v):
        if v in expressions:
            return expressions[v]
        if v not in position:
            raise RuntimeError("x_{} is referenced before it is solved".format(v))
        return tuple(int(index == position[v]) for index in range(len(free_vars)))

    for i, j in sorted(p.blocks, key=lambda block: block[1]):
        expressions[j] = tuple(
            a + b - c
            for a, b, c in zip(expression(i), expression(i - 1), expression(j - 1))
        )

    for j, coefficients in expressions.items():
        # every form is 1/2 at the cube centre, which keeps the section full-dimensional
        if sum(coefficients) != 1:
            raise RuntimeError(
                "x_{} = {} does not pass through the cube centre".format(j, coefficients)
            )

    return AffineSystem(
        k=p.k,
        free_vars=free_vars,
        solved=tuple(
            (j, AffineForm(coefficients=expressions[j])) for j in sorted(expressions)
        ),
        closure=closure,
    )


def exact_volume(s: AffineSystem) -> VolumeEstimate:
    if s.dimension > MAX_EXACT_DIMENSION:
        raise UnsupportedDimensionException(
            "Exact volumes are limited to dimension {} (k <= {}), got {}; "
            "use mc_volume instead".format(
                MAX_EXACT_DIMENSION, 2 * (MAX_EXACT_DIMENSION - 1), s.dimension
            )
        )
    if s.collapses:
        value = Fraction(0)
    else:
        value = cube_section_volume(
            [form.coefficients for form in s.forms], [form.constant for form in s.forms]
        )
    return VolumeEstimate(value=value, stderr=0.0, samples=0, method=VolumeMethods.EXACT)


def mc_volume(s: AffineSystem, samples=DEFAULT_MC_SAMPLES, seed=0) -> VolumeEstimate:
    """
    Fraction of uniform points of the free cube whose solved forms all land in [0,1].

    Points come in chunks of MC_CHUNK_SIZE, chunk c drawn from rng_for(seed, c), and the hit
    count is an integer, so the estimate does not depend on how chunks are scheduled.
    """
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 1:
        raise RejectedInputException("samples must be a positive integer, got {!r}".format(samples))
    if s.collapses:
        return VolumeEstimate(
            value=0.0, stderr=0.0, samples=samples, method=VolumeMethods.MONTE_CARLO
        )

    A = np.array([form.coefficients for form in s.forms], dtype=float).reshape(
        len(s.forms), s.dimension
    )
    b = np.array([form.constant for form in s.forms], dtype=float)

    hits = 0
    for chunk, start in enumerate(range(0, samples, MC_CHUNK_SIZE)):
        size = min(MC_CHUNK_SIZE, samples - start)
        points = rng_for(seed, chunk).random((size, s.dimension))
        values = points @ A.T + b
        inside = np.all((values >= 0.0) & (values <= 1.0), axis=1)
        hits += int(np.count_nonzero(inside))

    value = hits / samples
    return VolumeEstimate(
        value=value,
        stderr=math.sqrt(value * (1.0 - value) / samples),
        samples=samples,
        method=VolumeMethods.MONTE_CARLO,
    )


@lru_cache(maxsize=None)
def _exact_hankel_volume(p: PairPartition, closure: VolumeClosures) -> VolumeEstimate:
    return exact_volume(build_affine_system(p, closure=closure))


def compute_hankel_volume(
    p: PairPartition,
    method=VolumeMethods.EXACT,
    samples: Optional[int] = None,
    seed=0,
    closure=VolumeClosures.OPEN,
) -> VolumeEstimate:
    method = VolumeMethods(method)
    closure = VolumeClosures(closure)
    if method == VolumeMethods.EXACT:
        return _exact_hankel_volume(p, closure)
    return mc_volume(
        build_affine_system(p, closure=closure),
        samples=DEFAULT_MC_SAMPLES if samples is None else samples,
        seed=seed,
    )


def hankel_volume(
    p: PairPartition,
    method=VolumeMethods.EXACT,
    samples: Optional[int] = None,
    seed=0,
    closure=VolumeClosures.OPEN,
) -> VolumeEstimate:
    estimate = compute_hankel_volume(
        p, method=method, samples=samples, seed=seed, closure=closure
    )
    log(
        "theory",
        "[{date}] p_H{partition} = {value} ({method}, {closure})",
        partition=p,
        value=estimate,
        method=estimate.method,
        closure=VolumeClosures(closure),
    )
    return estimate


def consistent_sequence_fraction(p: PairPartition, n) -> Fraction:
    """
    #S_n(p) / n^(k/2+1) by brute force.

    S_n(p) holds the sequences (p_1..p_k) in {1..n}^k with p_{k+1} = p_1 whose sums
    p_i + p_{i+1} agree exactly on the blocks of p.
    """
    k = p.k
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise RejectedInputException("n must be a positive integer, got {!r}".format(n))
    if k > MAX_SEQUENCE_K or n ** k > MAX_SEQUENCE_POINTS:
        raise UnsupportedDimensionException(
            "Sequence counting is limited to k <= {} and n^k <= {}, got k = {}, n = {}".format(
                MAX_SEQUENCE_K, MAX_SEQUENCE_POINTS, k, n
            )
        )

    rest = np.indices((n,) * (k - 1)).reshape(k - 1, -1) + 1
    count = 0
    for first in range(1, n + 1):
        sequence = np.vstack([np.full((1, rest.shape[1]), first), rest])
        sums = sequence + np.roll(sequence, -1, axis=0)
        consistent = np.ones(rest.shape[1], dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                equal = sums[i] == sums[j]
                paired = p.mate(i + 1) == j + 1
                consistent &= equal if paired else ~equal
        count += int(np.count_nonzero(consistent))

    return Fraction(count, n ** (k // 2 + 1))
