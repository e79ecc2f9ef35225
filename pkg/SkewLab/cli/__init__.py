import configparser
import csv
import functools
import json
import os
import sys

import click
from flask import Blueprint, current_app
from marshmallow import ValidationError

from SkewLab.config import EnvInterpolation
from SkewLab.constants.cli import ExitCodes, OutputFiles
from SkewLab.constants.volumes import VolumeClosures, VolumeMethods
from SkewLab.ensembles import (
    REGIME_REGEX,
    EnsembleSpec,
    sample_matrix,
    validate_covariance,
)
from SkewLab.exceptions import RejectedInputException, SolverConvergenceException
from SkewLab.moments import limit_moment, limit_moment_sequence, moment_sequence
from SkewLab.moments.cumulants import check_free_convolution
from SkewLab.partitions import (
    count_noncrossing,
    enumerate_pair_partitions,
    format_partition,
    parse_partition,
)
from SkewLab.schemas.config import ExperimentConfigSchema
from SkewLab.schemas.reports import (
    CovarianceReportSchema,
    FreeConvolutionReportSchema,
    MomentReportSchema,
    SequenceFractionSchema,
    VolumeEstimateSchema,
)
from SkewLab.spectra import TRIAL_MOMENTS, moment_report, pooled_histogram, run_trials
from SkewLab.spectra.concentration import concentration_statistic
from SkewLab.utils.csv import (
    dump_concentration_csv,
    dump_histogram_csv,
    dump_matrix_csv,
    dump_moments_csv,
    dump_trials_csv,
    load_trials_csv,
)
from SkewLab.utils.manifest import dump_json, write_outputs
from SkewLab.volumes import consistent_sequence_fraction, hankel_volume

_cli = Blueprint("cli", __name__)


def read_experiment_file(path):
    parser = configparser.ConfigParser(interpolation=EnvInterpolation())
    if not parser.read(path):
        raise RejectedInputException("Cannot read config file {}".format(path))
    if not parser.has_section("experiment"):
        raise RejectedInputException("Config file {} has no [experiment] section".format(path))
    return {
        key.replace("-", "_"): value
        for key, value in parser.items("experiment")
        if value is not None and value != ""
    }


def config_defaults():
    config = current_app.config
    return {
        "seed": config["DEFAULT_SEED"],
        "trials": config["DEFAULT_TRIALS"],
        "kmax": config["DEFAULT_KMAX"],
        "samples": config["MC_SAMPLES"],
        "workers": config["WORKERS"],
        "bins": config["HISTOGRAM_BINS"],
        "hist_range": list(config["HISTOGRAM_RANGE"]),
        "resamples": config["BOOTSTRAP_RESAMPLES"],
        "out": config["OUTPUT_DIR"],
        "method": str(VolumeMethods.EXACT),
        "closure": str(VolumeClosures.OPEN),
        "dist": "gaussian",
        "max_lag": 2,
    }


def resolve(view, params, **command_defaults):
    """
    Merge app config defaults, command defaults, the --config file and explicit flags, in
    increasing precedence, and validate the result. Returns the loaded config, the schema
    that loaded it and the keys that did not come from a default.
    """
    data = config_defaults()
    data.update(command_defaults)

    explicit = {}
    config_path = params.pop("config", None)
    if config_path:
        explicit.update(read_experiment_file(config_path))
    explicit.update({key: value for key, value in params.items() if value is not None})
    data.update(explicit)

    schema = ExperimentConfigSchema(view=view)
    return schema.load(data), schema, set(explicit)


def require(config, key):
    if config.get(key) is None:
        raise RejectedInputException("{} is required".format(key))
    return config[key]


def build_spec(config, n=None):
    n = require(config, "n") if n is None else n
    regime = require(config, "regime")
    if REGIME_REGEX.match(regime).group(2):
        return EnsembleSpec.parse(regime, n=n, entry_dist=config["dist"])
    return EnsembleSpec(
        n=n,
        regime=regime,
        rho=config.get("rho"),
        c=config.get("c"),
        entry_dist=config["dist"],
    )


def emit(config, schema, explicit, outputs, primary):
    """Print the primary output; write everything plus a manifest when --out was chosen."""
    click.echo(outputs[primary], nl=False)
    if "out" in explicit:
        write_outputs(
            config["out"], outputs, current_app.VERSION, schema.dump(config), config.get("seed")
        )


def harness_command(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            code = f(*args, **kwargs)
        except ValidationError as e:
            click.echo(
                "Invalid configuration: {}".format(json.dumps(e.messages, sort_keys=True)),
                err=True,
            )
            sys.exit(int(ExitCodes.VALIDATION_FAILURE))
        except (RejectedInputException, SolverConvergenceException, OSError) as e:
            click.echo("Error: {}".format(e), err=True)
            sys.exit(int(ExitCodes.VALIDATION_FAILURE))
        sys.exit(int(code or ExitCodes.SUCCESS))

    return wrapper


def common_options(f):
    f = click.option("--seed", type=int, default=None, help="Master seed")(f)
    f = click.option("--out", default=None, help="Directory for outputs and the manifest")(f)
    f = click.option(
        "--config",
        "config",
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help="ini file with an [experiment] section",
    )(f)
    return f


def spec_options(f):
    f = click.option("--regime", default=None, help="weak_c1, constant_c2, hankel, iid or a label like constant_c2(1/2)")(f)
    f = click.option("--rho", type=float, default=None, help="AR(1) coefficient of weak_c1")(f)
    f = click.option("--c", "c", default=None, help="Correlation of constant_c2, e.g. 1/2")(f)
    f = click.option("--dist", default=None, help="gaussian or rademacher")(f)
    return f


@_cli.cli.command("partitions")
@click.option("--k", "k", type=int, default=None)
@click.option("--list", "list", is_flag=True, default=None, help="Print every partition")
@common_options
@harness_command
def partitions(**params):
    config, schema, explicit = resolve("partitions", params)
    k = require(config, "k")
    pairs = enumerate_pair_partitions(k)
    lines = [
        "pair_partitions: {}".format(len(pairs)),
        "noncrossing: {}".format(count_noncrossing(k)),
    ]
    if config.get("list"):
        lines.extend(format_partition(p) for p in pairs)
    text = "".join(line + "\n" for line in lines)
    emit(config, schema, explicit, {str(OutputFiles.PARTITIONS): text}, str(OutputFiles.PARTITIONS))


@_cli.cli.command("volume")
@click.option("--k", "k", type=int, default=None)
@click.option("--partition", default=None, help='e.g. "{1,3}{2,4}"; every partition of k when omitted')
@click.option("--method", default=None, help="exact or mc")
@click.option("--samples", type=int, default=None)
@click.option("--closure", default=None, help="open or cyclic")
@common_options
@harness_command
def volume(**params):
    config, schema, explicit = resolve("volume", params)
    closure = VolumeClosures(config["closure"])
    if config.get("partition"):
        chosen = [parse_partition(config["partition"], k=config.get("k"))]
    else:
        chosen = enumerate_pair_partitions(require(config, "k"))

    results = []
    for p in chosen:
        estimate = hankel_volume(
            p,
            method=config["method"],
            samples=config["samples"],
            seed=config["seed"],
            closure=closure,
        )
        results.append(
            {
                "partition": format_partition(p),
                "method": estimate.method,
                "closure": closure,
                "value": estimate.value,
                "stderr": estimate.stderr,
                "samples": estimate.samples,
            }
        )

    payload = VolumeEstimateSchema(many=len(results) > 1).dump(
        results if len(results) > 1 else results[0]
    )
    emit(config, schema, explicit, {str(OutputFiles.VOLUME): dump_json(payload)}, str(OutputFiles.VOLUME))


@_cli.cli.command("moments")
@click.option("--kmax", type=int, default=None)
@click.option("--c", "c", default=None, help="Correlation parameter in [0,1], e.g. 1/2")
@click.option("--method", default=None, help="exact or mc")
@click.option("--samples", type=int, default=None)
@click.option("--workers", type=int, default=None, help="Processes computing partition volumes")
@click.option("--closure", default=None, help="open or cyclic")
@common_options
@harness_command
def moments(**params):
    config, schema, explicit = resolve("moments", params)
    c = require(config, "c")
    kmax = config["kmax"]
    closure = VolumeClosures(config["closure"])

    if VolumeMethods(config["method"]) == VolumeMethods.EXACT:
        sequence = limit_moment_sequence(c, kmax, closure=closure, workers=config["workers"])
        table = dump_moments_csv(sequence)
    else:
        estimates = [
            limit_moment(
                k,
                c,
                method=VolumeMethods.MONTE_CARLO,
                samples=config["samples"],
                seed=config["seed"],
                closure=closure,
                workers=config["workers"],
            )
            for k in range(1, kmax + 1)
        ]
        table = dump_moments_csv(
            moment_sequence([e.value for e in estimates], label=c),
            stderrs={k: e.stderr for k, e in enumerate(estimates, start=1)},
        )

    emit(config, schema, explicit, {str(OutputFiles.MOMENTS): table.getvalue().decode("utf-8")}, str(OutputFiles.MOMENTS))


@_cli.cli.command("simulate")
@spec_options
@click.option("--n", "n", type=int, default=None, help="Matrix size")
@click.option("--trials", type=int, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--bins", type=int, default=None)
@click.option("--hist-range", default=None, help="lo,hi")
@click.option("--dump-matrices", is_flag=True, default=None, help="Also write every sampled matrix")
@common_options
@harness_command
def simulate(**params):
    config, schema, _ = resolve("simulate", params)
    spec = build_spec(config)
    records = run_trials(spec, config["trials"], config["seed"], workers=config["workers"])
    histogram = pooled_histogram(
        [record.sample for record in records],
        bins=config["bins"],
        value_range=config["hist_range"],
    )

    outputs = {
        str(OutputFiles.TRIALS): dump_trials_csv(records),
        str(OutputFiles.HISTOGRAM): dump_histogram_csv(histogram),
    }
    if config.get("dump_matrices"):
        for index, record in enumerate(records):
            name = "{}/{:04d}.csv".format(OutputFiles.MATRICES, index)
            outputs[name] = dump_matrix_csv(sample_matrix(spec, record.seed))

    write_outputs(
        config["out"], outputs, current_app.VERSION, schema.dump(config), config["seed"]
    )
    click.echo(
        "Wrote {} trials of {} (n = {}) to {}".format(
            len(records), spec.label, spec.n, config["out"]
        )
    )


@_cli.cli.command("compare")
@click.option("--trials-file", default=None, help="trials.csv from simulate; defaults to OUT/trials.csv")
@click.option("--kmax", type=int, default=None)
@click.option("--c", "c", default=None, help="Correlation to compare against; defaults to the regime's")
@click.option("--closure", default=None, help="open or cyclic")
@common_options
@harness_command
def compare(**params):
    config, schema, explicit = resolve("compare", params, closure=str(VolumeClosures.CYCLIC))
    path = config.get("trials_file") or os.path.join(config["out"], str(OutputFiles.TRIALS))
    with open(path, newline="") as f:
        records = load_trials_csv(csv.DictReader(f))

    regimes = sorted({record.regime for record in records})
    if len(regimes) != 1:
        raise RejectedInputException("Trials file mixes regimes {}".format(", ".join(regimes)))
    c = config.get("c")
    if c is None:
        c = EnsembleSpec.parse(regimes[0], n=records[0].n).limit_correlation

    closure = VolumeClosures(config["closure"])
    theory = {
        k: limit_moment(k, c, closure=closure)
        for k in range(1, min(config["kmax"], TRIAL_MOMENTS) + 1)
    }
    report = moment_report(records, theory)
    payload = MomentReportSchema().dump(
        {
            "regime": report.regime,
            "c": c,
            "closure": closure,
            "passed": report.passed,
            "rows": report.rows,
        }
    )
    emit(config, schema, explicit, {str(OutputFiles.COMPARE): dump_json(payload)}, str(OutputFiles.COMPARE))
    return ExitCodes.SUCCESS if report.passed else ExitCodes.ACCEPTANCE_FAILURE


@_cli.cli.command("freeconv")
@click.option("--c", "c", default=None, help="Correlation parameter in [0,1], e.g. 1/2")
@click.option("--kmax", type=int, default=None)
@click.option("--closure", default=None, help="open or cyclic")
@common_options
@harness_command
def freeconv(**params):
    config, schema, explicit = resolve("freeconv", params, closure=str(VolumeClosures.CYCLIC))
    report = check_free_convolution(
        require(config, "c"), kmax=config["kmax"], closure=config["closure"]
    )
    payload = FreeConvolutionReportSchema().dump(report)
    emit(config, schema, explicit, {str(OutputFiles.FREECONV): dump_json(payload)}, str(OutputFiles.FREECONV))
    return ExitCodes.SUCCESS if report.passed else ExitCodes.ACCEPTANCE_FAILURE


@_cli.cli.command("concentration")
@spec_options
@click.option("--k", "k", type=int, default=None, help="Power of X in tr X^k")
@click.option("--n-list", default=None, help="Matrix sizes, e.g. 128,256,512")
@click.option("--trials", type=int, default=None)
@click.option("--resamples", type=int, default=None)
@common_options
@harness_command
def concentration(**params):
    config, schema, _ = resolve(
        "concentration", params, k=2, n_list="128,256,512", trials=100
    )
    sizes = config["n_list"]
    spec = build_spec(config, n=sizes[0])
    table = concentration_statistic(
        spec,
        config["k"],
        sizes,
        config["trials"],
        config["seed"],
        resamples=config["resamples"],
    )
    write_outputs(
        config["out"],
        {str(OutputFiles.CONCENTRATION): dump_concentration_csv(table)},
        current_app.VERSION,
        schema.dump(config),
        config["seed"],
    )
    click.echo(
        "tr X^{} for {}: slope {:.3f} +- {:.3f}, {}".format(
            table.k,
            table.regime,
            table.slope,
            table.slope_stderr,
            "bounded" if table.bounded else "growing",
        )
    )
    return ExitCodes.SUCCESS if table.bounded else ExitCodes.ACCEPTANCE_FAILURE


@_cli.cli.command("sequences")
@click.option("--partition", default=None, help='e.g. "{1,3}{2,4}"')
@click.option("--n", "n", type=int, default=None)
@common_options
@harness_command
def sequences(**params):
    config, schema, explicit = resolve("sequences", params)
    p = parse_partition(require(config, "partition"))
    n = require(config, "n")
    fraction = consistent_sequence_fraction(p, n)
    payload = SequenceFractionSchema().dump(
        {
            "partition": format_partition(p),
            "n": n,
            "fraction": fraction,
            "fraction_float": float(fraction),
            "open_volume": hankel_volume(p, closure=VolumeClosures.OPEN).value,
            "cyclic_volume": hankel_volume(p, closure=VolumeClosures.CYCLIC).value,
        }
    )
    emit(config, schema, explicit, {str(OutputFiles.SEQUENCES): dump_json(payload)}, str(OutputFiles.SEQUENCES))


@_cli.cli.command("covariance")
@spec_options
@click.option("--n", "n", type=int, default=None, help="Matrix size")
@click.option("--trials", type=int, default=None)
@click.option("--max-lag", type=int, default=None)
@common_options
@harness_command
def covariance(**params):
    config, schema, explicit = resolve("covariance", params, n=64, trials=200)
    spec = build_spec(config)
    report = validate_covariance(
        spec, config["trials"], config["seed"], max_lag=config["max_lag"]
    )
    payload = CovarianceReportSchema().dump(report)
    emit(config, schema, explicit, {str(OutputFiles.COVARIANCE): dump_json(payload)}, str(OutputFiles.COVARIANCE))
    return ExitCodes.SUCCESS if report.passed else ExitCodes.ACCEPTANCE_FAILURE
