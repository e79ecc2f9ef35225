import csv
from io import BytesIO, StringIO

from SkewLab.exceptions import EmptySimulationException, RejectedInputException
from SkewLab.spectra import TRIAL_MOMENTS, TrialRecord
from SkewLab.utils.formatters import rational_str

TRIALS_HEADER = ["seed", "n", "regime"] + [
    "m{}".format(k) for k in range(1, TRIAL_MOMENTS + 1)
] + ["ks"]
HISTOGRAM_HEADER = ["bin_lo", "bin_hi", "count"]
CONCENTRATION_HEADER = ["n", "k", "fourth_central_moment", "ratio_to_n2"]
MOMENTS_HEADER = ["k", "M_k_exact", "M_k_float"]
MATRIX_HEADER = ["n", "regime", "seed"]


def float_str(value):
    # shortest repr that reads back to the same double
    return repr(float(value))


def _to_bytes(temp):
    output = BytesIO()
    output.write(temp.getvalue().encode("utf-8"))
    output.seek(0)
    temp.close()
    return output


def dump_trials_csv(records):
    temp = StringIO()
    writer = csv.writer(temp, lineterminator="\n")
    writer.writerow(TRIALS_HEADER)
    for record in records:
        writer.writerow(
            [record.seed, record.n, record.regime]
            + [float_str(m) for m in record.moments]
            + [float_str(record.ks)]
        )
    return _to_bytes(temp)


def dump_histogram_csv(histogram):
    """
    One row per bin. Values below or above the range are kept as rows with an open end,
    (-inf, lo) and (hi, inf).
    """
    temp = StringIO()
    writer = csv.writer(temp, lineterminator="\n")
    writer.writerow(HISTOGRAM_HEADER)
    writer.writerow(["-inf", float_str(histogram.edges[0]), histogram.underflow])
    for lo, hi, count in histogram.bins():
        writer.writerow([float_str(lo), float_str(hi), count])
    writer.writerow([float_str(histogram.edges[-1]), "inf", histogram.overflow])
    return _to_bytes(temp)


def dump_concentration_csv(table):
    temp = StringIO()
    writer = csv.writer(temp, lineterminator="\n")
    writer.writerow(CONCENTRATION_HEADER)
    for row in table.rows:
        writer.writerow(
            [row.n, row.k, float_str(row.fourth_central_moment), float_str(row.ratio_to_n2)]
        )
    return _to_bytes(temp)


def dump_moments_csv(sequence, stderrs=None):
    """
    Exact moments fill M_k_exact with "p/q". Estimated moments leave it empty and add an
    M_k_stderr column.
    """
    temp = StringIO()
    writer = csv.writer(temp, lineterminator="\n")
    header = list(MOMENTS_HEADER)
    if stderrs is not None:
        header.append("M_k_stderr")
    writer.writerow(header)
    for k, value in sequence.items():
        if stderrs is None:
            writer.writerow([k, rational_str(value), float_str(value)])
        else:
            writer.writerow([k, "", float_str(value), float_str(stderrs[k])])
    return _to_bytes(temp)


def dump_matrix_csv(matrix):
    temp = StringIO()
    writer = csv.writer(temp, lineterminator="\n")
    writer.writerow(MATRIX_HEADER)
    writer.writerow([matrix.n, matrix.spec.label if matrix.spec else "", matrix.seed])
    for row in matrix.entries:
        writer.writerow([float_str(v) for v in row])
    return _to_bytes(temp)


def load_trials_csv(dict_reader):
    """Trial records from a trials.csv reader; only the declared columns are read."""
    missing = [name for name in TRIALS_HEADER if name not in (dict_reader.fieldnames or [])]
    if missing:
        raise RejectedInputException(
            "Trials file is missing columns: {}".format(", ".join(missing))
        )

    records = []
    for i, line in enumerate(dict_reader):
        try:
            records.append(
                TrialRecord(
                    seed=int(line["seed"]),
                    n=int(line["n"]),
                    regime=line["regime"],
                    moments=tuple(
                        float(line["m{}".format(k)]) for k in range(1, TRIAL_MOMENTS + 1)
                    ),
                    ks=float(line["ks"]),
                )
            )
        except (TypeError, ValueError) as e:
            raise RejectedInputException("Malformed trials row {}: {}".format(i + 1, e))

    if not records:
        raise EmptySimulationException("Trials file has no rows")
    return records
