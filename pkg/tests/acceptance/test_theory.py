from fractions import Fraction

import sympy

from SkewLab.constants.volumes import VolumeClosures
from SkewLab.moments import C, catalan, limit_moment, limit_moment_polynomial
from SkewLab.moments.cumulants import check_free_convolution
from SkewLab.partitions import enumerate_pair_partitions, is_crossing
from SkewLab.volumes import build_affine_system, hankel_volume, mc_volume


def test_noncrossing_volumes_are_one():
    for k in (2, 4, 6, 8):
        for p in enumerate_pair_partitions(k):
            if not is_crossing(p):
                assert hankel_volume(p).value == 1


def test_monte_carlo_volumes_agree_with_exact():
    for k in (2, 4, 6):
        for index, p in enumerate(enumerate_pair_partitions(k)):
            exact = hankel_volume(p).value
            estimate = mc_volume(build_affine_system(p), samples=10**6, seed=index)
            assert abs(estimate.value - float(exact)) <= 4 * estimate.stderr + 1e-12, p


def test_moment_formula():
    for k in range(2, 11, 2):
        assert limit_moment(k, 0) == catalan(k // 2)
    assert limit_moment_polynomial(4) == sympy.Poly(2 + sympy.Rational(5, 12) * C**2, C)
    for c in (Fraction(1, 5), Fraction(1, 2), 1):
        assert limit_moment(2, c) == 1
        assert limit_moment(5, c) == 0


def test_free_convolution_identity():
    for c in (Fraction(1, 3), Fraction(1, 2), Fraction(3, 4)):
        assert check_free_convolution(c, kmax=8, closure=VolumeClosures.CYCLIC).passed
