from SkewLab.constants import RawEnum


class ExitCodes(int, RawEnum):
    SUCCESS = 0
    VALIDATION_FAILURE = 1
    ACCEPTANCE_FAILURE = 2


class OutputFiles(str, RawEnum):
    PARTITIONS = "partitions.txt"
    TRIALS = "trials.csv"
    HISTOGRAM = "histogram.csv"
    CONCENTRATION = "concentration.csv"
    MOMENTS = "moments.csv"
    VOLUME = "volume.json"
    COMPARE = "compare.json"
    FREECONV = "freeconv.json"
    SEQUENCES = "sequences.json"
    COVARIANCE = "covariance.json"
    MATRICES = "matrices"
