from marshmallow import EXCLUDE, Schema, ValidationError, fields, validate, validates

from SkewLab.constants.ensembles import EntryDistributions, Regimes
from SkewLab.constants.volumes import (
    MAX_NONCROSSING_N,
    MAX_PAIR_PARTITION_K,
    VolumeClosures,
    VolumeMethods,
)
from SkewLab.ensembles import REGIME_REGEX
from SkewLab.schemas.fields import RangeField, RationalField, SizeListField
from SkewLab.utils import string_types


def enum_choices(enum):
    return [str(member) for member in enum.values()]


class ExperimentConfigSchema(Schema):
    """
    The resolved parameters of one subcommand. Values arrive as flags, as strings from an
    [experiment] ini section, or as app config defaults; keys outside the view are ignored.
    """

    class Meta:
        unknown = EXCLUDE
        ordered = True

    k = fields.Integer(
        validate=validate.Range(
            min=2, max=MAX_PAIR_PARTITION_K, error="k must lie in [{min}, {max}]"
        )
    )
    kmax = fields.Integer(
        validate=validate.Range(
            min=1, max=MAX_NONCROSSING_N, error="kmax must lie in [{min}, {max}]"
        )
    )
    c = RationalField(validate=validate.Range(min=0, max=1, error="c must lie in [0,1]"))
    n = fields.Integer(validate=validate.Range(min=1, error="n must be positive"))
    trials = fields.Integer(
        validate=validate.Range(min=1, error="trials must be positive")
    )
    seed = fields.Integer(
        validate=validate.Range(min=0, max=2**64 - 1, error="seed must be an unsigned 64-bit integer")
    )
    method = fields.String(validate=validate.OneOf(enum_choices(VolumeMethods)))
    closure = fields.String(validate=validate.OneOf(enum_choices(VolumeClosures)))
    regime = fields.String()
    rho = fields.Float(
        allow_none=True,
        validate=validate.Range(min=0, max=1, max_inclusive=False, error="rho must lie in [0,1)"),
    )
    dist = fields.String(validate=validate.OneOf(enum_choices(EntryDistributions)))
    samples = fields.Integer(validate=validate.Range(min=1, error="samples must be positive"))
    workers = fields.Integer(validate=validate.Range(min=1, error="workers must be positive"))
    bins = fields.Integer(validate=validate.Range(min=1, error="bins must be positive"))
    hist_range = RangeField()
    partition = fields.String()
    n_list = SizeListField()
    resamples = fields.Integer(
        validate=validate.Range(min=1, error="resamples must be positive")
    )
    max_lag = fields.Integer(validate=validate.Range(min=1, error="max_lag must be positive"))
    trials_file = fields.String()
    out = fields.String()
    list = fields.Boolean()
    dump_matrices = fields.Boolean()

    views = {
        "partitions": ["k", "list", "seed", "out"],
        "volume": ["k", "partition", "method", "samples", "seed", "closure", "out"],
        "moments": ["kmax", "c", "method", "samples", "seed", "closure", "workers", "out"],
        "simulate": [
            "regime",
            "n",
            "rho",
            "c",
            "dist",
            "trials",
            "seed",
            "workers",
            "bins",
            "hist_range",
            "dump_matrices",
            "out",
        ],
        "compare": ["trials_file", "kmax", "c", "closure", "seed", "out"],
        "freeconv": ["c", "kmax", "closure", "out"],
        "concentration": [
            "regime",
            "rho",
            "c",
            "dist",
            "k",
            "n_list",
            "trials",
            "seed",
            "resamples",
            "out",
        ],
        "sequences": ["partition", "n", "out"],
        "covariance": [
            "regime",
            "n",
            "rho",
            "c",
            "dist",
            "trials",
            "seed",
            "max_lag",
            "out",
        ],
    }

    @validates("k")
    def validate_k(self, value):
        if value % 2:
            raise ValidationError("k must be even")

    @validates("regime")
    def validate_regime(self, value):
        match = REGIME_REGEX.match(value)
        if match is None or not Regimes.test(match.group(1)):
            raise ValidationError(
                "Unknown regime {!r}, expected one of {}".format(
                    value, ", ".join(enum_choices(Regimes))
                )
            )

    def __init__(self, view=None, *args, **kwargs):
        if view:
            if isinstance(view, string_types):
                kwargs["only"] = self.views[view]
            elif isinstance(view, list):
                kwargs["only"] = view

        super(ExperimentConfigSchema, self).__init__(*args, **kwargs)
