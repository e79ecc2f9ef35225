from fractions import Fraction

from SkewLab.exceptions import RejectedInputException
from SkewLab.utils import string_types


def rational_str(value):
    """Lossless text for an exact rational, "p/q" or "p" when integral."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "{}/{}".format(value.numerator, value.denominator)


def parse_rational(value):
    """
    Parse "p/q", integers and decimal strings exactly, e.g. "0.25" -> 1/4.
    Floats are read through their shortest repr so 0.1 becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise RejectedInputException("Not a rational number: {!r}".format(value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, string_types):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise RejectedInputException("Not a rational number: {!r}".format(value))
