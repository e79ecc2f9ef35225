from fractions import Fraction

import pytest

from SkewLab.exceptions import RejectedInputException
from SkewLab.utils.formatters import parse_rational, rational_str


def test_rational_str():
    assert rational_str(Fraction(5, 12)) == "5/12"
    assert rational_str(Fraction(4, 2)) == "2"
    assert rational_str(0) == "0"
    assert rational_str(Fraction(-1, 3)) == "-1/3"


def test_parse_rational():
    assert parse_rational("1/2") == Fraction(1, 2)
    assert parse_rational(" 0.25 ") == Fraction(1, 4)
    assert parse_rational(0.1) == Fraction(1, 10)
    assert parse_rational(3) == 3
    assert parse_rational(Fraction(2, 3)) == Fraction(2, 3)
    for value in ("x", "1/0", None, True, [1]):
        with pytest.raises(RejectedInputException):
            parse_rational(value)
