import configparser
import os
from typing import Tuple

TRUTHY = ("y", "yes", "t", "true", "on", "1")
FALSY = ("n", "no", "f", "false", "off", "0")


def strtobool(value):
    value = value.lower()
    if value in TRUTHY:
        return True
    elif value in FALSY:
        return False
    raise ValueError("invalid truth value {!r}".format(value))


class EnvInterpolation(configparser.BasicInterpolation):
    """Interpolation which expands environment variables in values."""

    def before_get(self, parser, section, option, value, defaults):
        value = super().before_get(parser, section, option, value, defaults)
        envvar = os.getenv(option)
        if value == "" and envvar:
            return process_string_var(envvar)
        else:
            return value


def process_string_var(value):
    if value == "":
        return None

    if value.isdigit():
        return int(value)
    elif value.replace(".", "", 1).isdigit():
        return float(value)

    try:
        return strtobool(value)
    except ValueError:
        return value


def empty_str_cast(value, default=None):
    if value == "":
        return default
    return value


def process_range_str(value, default):
    if value in ("", None):
        return default
    lo, hi = (float(v) for v in str(value).split(","))
    return lo, hi


config_ini = configparser.ConfigParser(interpolation=EnvInterpolation())
config_ini.optionxform = str  # Makes the key value case-insensitive
path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.ini")
config_ini.read(path)


# fmt: off
class LabConfig(object):
    # === OUTPUTS ===
    OUTPUT_DIR: str = empty_str_cast(config_ini["lab"]["OUTPUT_DIR"]) \
        or os.path.join(os.getcwd(), "output")

    # === RANDOMNESS ===
    DEFAULT_SEED: int = int(empty_str_cast(config_ini["lab"]["DEFAULT_SEED"], default=0))

    DEFAULT_TRIALS: int = int(empty_str_cast(config_ini["lab"]["DEFAULT_TRIALS"], default=20))

    WORKERS: int = int(empty_str_cast(config_ini["lab"]["WORKERS"], default=1))

    # === THEORY ===
    DEFAULT_KMAX: int = int(empty_str_cast(config_ini["lab"]["DEFAULT_KMAX"], default=8))

    MC_SAMPLES: int = int(empty_str_cast(config_ini["lab"]["MC_SAMPLES"], default=1000000))

    # === REPORTING ===
    HISTOGRAM_BINS: int = int(empty_str_cast(config_ini["lab"]["HISTOGRAM_BINS"], default=60))

    HISTOGRAM_RANGE: Tuple[float, float] = process_range_str(config_ini["lab"]["HISTOGRAM_RANGE"], default=(-3.0, 3.0))

    BOOTSTRAP_RESAMPLES: int = int(empty_str_cast(config_ini["lab"]["BOOTSTRAP_RESAMPLES"], default=200))

    # === LOGS ===
    LOG_FOLDER: str = empty_str_cast(config_ini["logs"]["LOG_FOLDER"]) \
        or os.path.join(os.path.dirname(os.path.abspath(__file__)), "logs")
# fmt: on


class TestingConfig(LabConfig):
    TESTING = True
    DEBUG = True
    DEFAULT_SEED = 1234
    MC_SAMPLES = 20000
    BOOTSTRAP_RESAMPLES = 50
    WORKERS = 1
    OUTPUT_DIR = os.getenv("TESTING_OUTPUT_DIR") or os.path.join(
        os.path.dirname(os.path.abspath(__file__)), os.pardir, ".data", "output"
    )
    LOG_FOLDER = os.getenv("TESTING_LOG_FOLDER") or os.path.join(
        os.path.dirname(os.path.abspath(__file__)), os.pardir, ".data", "logs"
    )


# Actually initialize LabConfig to allow us to add more attributes on
Config = LabConfig()
for k, v in config_ini.items("extra"):
    setattr(Config, k, v)
