from fractions import Fraction

import pytest
from marshmallow import ValidationError

from SkewLab.schemas.config import ExperimentConfigSchema


def test_experiment_config_schema_views():
    schema = ExperimentConfigSchema(view="freeconv")
    loaded = schema.load({"c": "1/2", "kmax": "8", "closure": "cyclic", "n": 4, "bogus": 1})
    assert loaded == {"c": Fraction(1, 2), "kmax": 8, "closure": "cyclic"}
    assert schema.dump(loaded) == {"c": "1/2", "kmax": 8, "closure": "cyclic"}


def test_experiment_config_schema_parses_ini_strings():
    loaded = ExperimentConfigSchema(view="concentration").load(
        {"regime": "constant_c2(1/4)", "n_list": "64, 128", "trials": "60", "k": "2"}
    )
    assert loaded["n_list"] == [64, 128]
    assert loaded["trials"] == 60
    loaded = ExperimentConfigSchema(view="simulate").load(
        {"regime": "hankel", "hist_range": "-2.5,2.5", "dump_matrices": "true"}
    )
    assert loaded["hist_range"] == (-2.5, 2.5)
    assert loaded["dump_matrices"] is True


@pytest.mark.parametrize(
    "view,data,field",
    [
        ("partitions", {"k": 5}, "k"),
        ("partitions", {"k": 14}, "k"),
        ("moments", {"c": "3/2"}, "c"),
        ("moments", {"c": "x"}, "c"),
        ("moments", {"kmax": 13}, "kmax"),
        ("moments", {"method": "quadrature"}, "method"),
        ("volume", {"closure": "periodic"}, "closure"),
        ("simulate", {"regime": "wigner"}, "regime"),
        ("simulate", {"rho": 1.0}, "rho"),
        ("simulate", {"dist": "cauchy"}, "dist"),
        ("simulate", {"hist_range": "1,1"}, "hist_range"),
        ("simulate", {"seed": -1}, "seed"),
        ("concentration", {"n_list": "64,x"}, "n_list"),
        ("concentration", {"n_list": "128,128"}, "n_list"),
        ("covariance", {"max_lag": 0}, "max_lag"),
    ],
)
def test_experiment_config_schema_rejects(view, data, field):
    with pytest.raises(ValidationError) as e:
        ExperimentConfigSchema(view=view).load(data)
    assert field in e.value.messages
