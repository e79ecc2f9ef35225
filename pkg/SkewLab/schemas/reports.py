from marshmallow import Schema, fields

from SkewLab.schemas.fields import RationalField


class ExactOrFloatField(fields.Field):
    """Exact values dump as "p/q", estimates as plain floats."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        if isinstance(value, float):
            return value
        return RationalField()._serialize(value, attr, obj)


class VolumeEstimateSchema(Schema):
    partition = fields.String()
    method = fields.String()
    closure = fields.String()
    value = ExactOrFloatField()
    stderr = fields.Float()
    samples = fields.Integer()


class OrderCheckSchema(Schema):
    order = fields.Integer()
    lhs = RationalField()
    rhs = RationalField()
    passed = fields.Boolean()


class FreeConvolutionReportSchema(Schema):
    c = RationalField()
    kmax = fields.Integer()
    closure = fields.String()
    passed = fields.Boolean()
    orders = fields.Nested(OrderCheckSchema, many=True)


class MomentRowSchema(Schema):
    k = fields.Integer()
    theoretical = RationalField()
    theoretical_float = fields.Function(lambda row: float(row.theoretical))
    mean = fields.Float()
    stderr = fields.Float()
    deviation = fields.Float()
    trials = fields.Integer()
    n = fields.Integer()
    flagged = fields.Boolean()


class MomentReportSchema(Schema):
    regime = fields.String()
    c = RationalField()
    closure = fields.String()
    passed = fields.Boolean()
    rows = fields.Nested(MomentRowSchema, many=True)


class CovarianceCheckSchema(Schema):
    statistic = fields.String()
    lag = fields.Integer()
    target = fields.Float()
    estimate = fields.Float()
    stderr = fields.Float()
    flagged = fields.Boolean()


class CovarianceReportSchema(Schema):
    regime = fields.Function(lambda report: report.spec.label)
    n = fields.Function(lambda report: report.spec.n)
    trials = fields.Integer()
    passed = fields.Boolean()
    checks = fields.Nested(CovarianceCheckSchema, many=True)


class SequenceFractionSchema(Schema):
    partition = fields.String()
    n = fields.Integer()
    fraction = RationalField()
    fraction_float = fields.Float()
    open_volume = RationalField()
    cyclic_volume = RationalField()
