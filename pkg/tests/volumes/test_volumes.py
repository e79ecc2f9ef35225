from fractions import Fraction

import numpy as np
import pytest
import sympy

from SkewLab.constants.volumes import VolumeClosures, VolumeMethods
from SkewLab.exceptions import RejectedInputException, UnsupportedDimensionException
from SkewLab.partitions import enumerate_pair_partitions, is_crossing, reflect
from SkewLab.volumes import (
    AffineForm,
    build_affine_system,
    consistent_sequence_fraction,
    exact_volume,
    hankel_volume,
    mc_volume,
)
from tests.helpers import gen_partition


def test_build_affine_system():
    """Test that x_3 and x_4 of {1,3}{2,4} are solved over x_0, x_1, x_2"""
    s = build_affine_system(gen_partition("{1,3}{2,4}"))
    assert s.free_vars == (0, 1, 2)
    assert s.dimension == 3
    assert s.variable(3) == AffineForm(coefficients=(1, 1, -1))
    assert s.variable(4) == AffineForm(coefficients=(-1, 0, 2))
    assert s.variable(1) == AffineForm(coefficients=(0, 1, 0))
    assert s.solve([Fraction(1, 2)] * 3) == {i: Fraction(1, 2) for i in range(5)}


def test_build_affine_system_dimension():
    for k in (2, 4, 6, 8):
        for p in enumerate_pair_partitions(k):
            assert build_affine_system(p).dimension == k // 2 + 1


def test_build_affine_system_closure():
    crossing = build_affine_system(gen_partition("{1,3}{2,4}"), closure=VolumeClosures.CYCLIC)
    assert crossing.collapses is True
    nested = build_affine_system(gen_partition("{1,4}{2,3}"), closure=VolumeClosures.CYCLIC)
    assert nested.collapses is False
    assert nested.closure_form().is_zero()
    assert build_affine_system(gen_partition("{1,3}{2,4}")).collapses is False


def test_exact_volume_crossing_k4():
    v = exact_volume(build_affine_system(gen_partition("{1,3}{2,4}")))
    assert v.value == Fraction(5, 12)
    assert v.stderr == 0
    assert v.exact
    assert str(v) == "5/12"


def test_exact_volume_matches_iterated_integral():
    """Test the {1,3}{2,4} volume against a symbolic integral over x_0, x_2 with x_1 integrated out"""
    x0, x2 = sympy.symbols("x0 x2")
    oracle = sympy.integrate(
        sympy.integrate(1 - (x0 - x2), (x2, x0 / 2, x0))
        + sympy.integrate(1 - (x2 - x0), (x2, x0, (1 + x0) / 2)),
        (x0, 0, 1),
    )
    v = exact_volume(build_affine_system(gen_partition("{1,3}{2,4}")))
    assert sympy.Rational(v.value.numerator, v.value.denominator) == oracle


def test_exact_volume_noncrossing_is_one():
    for k in (2, 4, 6, 8):
        for p in enumerate_pair_partitions(k):
            if not is_crossing(p):
                assert exact_volume(build_affine_system(p)).value == 1
                cyclic = build_affine_system(p, closure=VolumeClosures.CYCLIC)
                assert exact_volume(cyclic).value == 1


def test_exact_volume_k6():
    assert hankel_volume(gen_partition("{1,6}{2,4}{3,5}")).value == Fraction(7, 24)
    cyclic = hankel_volume(gen_partition("{1,4}{2,5}{3,6}"), closure=VolumeClosures.CYCLIC)
    assert cyclic.value == Fraction(1, 2)
    collapsed = hankel_volume(gen_partition("{1,6}{2,4}{3,5}"), closure=VolumeClosures.CYCLIC)
    assert collapsed.value == 0


def test_exact_volume_values_are_rational_in_unit_interval():
    for p in enumerate_pair_partitions(6):
        value = hankel_volume(p).value
        assert isinstance(value, Fraction)
        assert 0 <= value <= 1


def test_exact_volume_dimension_cap():
    p = enumerate_pair_partitions(12)[5]
    with pytest.raises(UnsupportedDimensionException) as e:
        exact_volume(build_affine_system(p))
    assert "mc_volume" in str(e.value)


def test_mc_volume_trivial_partition():
    s = build_affine_system(gen_partition("{1,2}{3,4}"))
    for seed in (0, 1, 99):
        v = mc_volume(s, samples=1000, seed=seed)
        assert v.value == 1.0
        assert v.stderr == 0.0
        assert v.method == VolumeMethods.MONTE_CARLO


def test_mc_volume_agrees_with_exact():
    for p in enumerate_pair_partitions(4) + enumerate_pair_partitions(6)[:5]:
        exact = hankel_volume(p).value
        estimate = mc_volume(build_affine_system(p), samples=200000, seed=7)
        assert abs(estimate.value - float(exact)) <= 4 * estimate.stderr + 1e-12


def test_mc_volume_is_deterministic():
    s = build_affine_system(gen_partition("{1,3}{2,4}"))
    assert mc_volume(s, samples=70000, seed=3) == mc_volume(s, samples=70000, seed=3)
    assert mc_volume(s, samples=70000, seed=3) != mc_volume(s, samples=70000, seed=4)


def test_mc_volume_rejects_bad_samples():
    s = build_affine_system(gen_partition("{1,2}"))
    for samples in (0, -5, 1.5, True):
        with pytest.raises(RejectedInputException):
            mc_volume(s, samples=samples)


def test_hankel_volume_mc_method():
    v = hankel_volume(gen_partition("{1,3}{2,4}"), method="mc", samples=50000, seed=1)
    assert not v.exact
    assert v.samples == 50000
    assert abs(v.value - 5 / 12) <= 4 * v.stderr


def test_consistent_sequence_fraction():
    assert consistent_sequence_fraction(gen_partition("{1,2}"), 5) == 1
    for n in (3, 6):
        assert consistent_sequence_fraction(gen_partition("{1,2}{3,4}"), n) == Fraction(n - 1, n)


def test_consistent_sequence_fraction_limits():
    with pytest.raises(RejectedInputException):
        consistent_sequence_fraction(gen_partition("{1,2}"), 0)
    with pytest.raises(UnsupportedDimensionException):
        consistent_sequence_fraction(gen_partition("{1,2}{3,4}{5,6}{7,8}"), 2)


def test_build_affine_system_satisfies_every_block_equation():
    rng = np.random.default_rng(11)
    for k in (2, 4, 6, 8):
        for p in enumerate_pair_partitions(k):
            s = build_affine_system(p)
            for _ in range(3):
                values = [Fraction(int(v), 97) for v in rng.integers(-200, 200, s.dimension)]
                x = s.solve(values)
                assert sorted(x) == list(range(k + 1))
                for i, j in p.blocks:
                    assert x[i] + x[i - 1] == x[j] + x[j - 1], (p, values)


@pytest.mark.parametrize("closure", [VolumeClosures.OPEN, VolumeClosures.CYCLIC])
def test_hankel_volume_is_reflection_invariant(closure):
    for k in (2, 4, 6):
        for p in enumerate_pair_partitions(k):
            assert (
                hankel_volume(p, closure=closure).value
                == hankel_volume(reflect(p), closure=closure).value
            ), p
