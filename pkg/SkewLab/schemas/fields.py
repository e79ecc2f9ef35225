from marshmallow import ValidationError, fields

from SkewLab.exceptions import RejectedInputException
from SkewLab.utils.formatters import parse_rational, rational_str


class RationalField(fields.Field):
    """Exact rationals, loaded from "p/q", integers or decimals and dumped as "p/q"."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return rational_str(value)

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            return parse_rational(value)
        except RejectedInputException as e:
            raise ValidationError(str(e))


class RangeField(fields.Field):
    """A "lo,hi" pair of floats."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return [float(v) for v in value]

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str):
            value = value.split(",")
        try:
            lo, hi = (float(v) for v in value)
        except (TypeError, ValueError):
            raise ValidationError("Ranges must be written as lo,hi")
        if not lo < hi:
            raise ValidationError("Ranges need lo < hi")
        return lo, hi


class SizeListField(fields.Field):
    """A comma separated list of positive matrix sizes such as "128,256,512"."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return ",".join(str(n) for n in value)

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str):
            value = [v for v in value.split(",") if v.strip()]
        try:
            sizes = [int(v) for v in value]
        except (TypeError, ValueError):
            raise ValidationError("Sizes must be a comma separated list of integers")
        if not sizes or any(n < 1 for n in sizes):
            raise ValidationError("Sizes must be positive integers")
        if len(set(sizes)) != len(sizes):
            raise ValidationError("Sizes must not repeat")
        return sizes
