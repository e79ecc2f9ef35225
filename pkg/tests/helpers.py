import logging
from fractions import Fraction

import numpy as np

from SkewLab import create_app
from SkewLab.config import TestingConfig
from SkewLab.ensembles import EnsembleSpec, SymmetricMatrix
from SkewLab.partitions import parse_partition
from SkewLab.spectra import eigenvalues
from SkewLab.utils.initialization import LOGGERS


def create_skewlab(config=TestingConfig, output_dir=None):
    if output_dir is not None:

        class OutputConfig(config):
            OUTPUT_DIR = str(output_dir)

        config = OutputConfig

    return create_app(config)


def destroy_skewlab(app):
    with app.app_context():
        for name in LOGGERS:
            logger = logging.getLogger(name)
            for handler in list(logger.handlers):
                logger.removeHandler(handler)
                handler.close()


def run_command(app, *args):
    """Invoke one lab subcommand through the Flask CLI runner."""
    runner = app.test_cli_runner(mix_stderr=False)
    return runner.invoke(args=[str(a) for a in args])


def gen_spec(n=16, regime="hankel", **kwargs):
    return EnsembleSpec(n=n, regime=regime, **kwargs)


def gen_partition(text):
    return parse_partition(text)


def gen_matrix(array, spec=None, seed=None):
    return SymmetricMatrix.from_array(np.array(array, dtype=float), spec=spec, seed=seed)


def gen_sample(array):
    return eigenvalues(gen_matrix(array))


def frac(text):
    return Fraction(text)
