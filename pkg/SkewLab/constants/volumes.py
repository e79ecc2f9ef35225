from SkewLab.constants import RawEnum


class VolumeMethods(str, RawEnum):
    EXACT = "exact"
    MONTE_CARLO = "mc"


class VolumeClosures(str, RawEnum):
    """
    OPEN solves the block equations over x_0..x_k with x_0 and x_k independent.
    CYCLIC also identifies x_k with x_0, as an index sequence of a trace closes on itself;
    the cross-section then has zero volume unless the identification already holds.
    """

    OPEN = "open"
    CYCLIC = "cyclic"


# Largest ground set accepted by the pair partition enumeration, (k-1)!! = 10395 at k = 12
MAX_PAIR_PARTITION_K = 12

# Largest ground set accepted by the non-crossing set partition enumeration, C_12 = 208012
MAX_NONCROSSING_N = 12

# Largest cross-section dimension k/2 + 1 handled by the exact volume method (k = 10)
MAX_EXACT_DIMENSION = 6

# Largest k and grid size n^k accepted by the brute-force consistent sequence count
MAX_SEQUENCE_K = 6
MAX_SEQUENCE_POINTS = 1 << 24

# Samples are drawn in fixed-size chunks, each with its own derived seed
MC_CHUNK_SIZE = 1 << 16

# Monte Carlo sample count used when none is given
DEFAULT_MC_SAMPLES = 1000000
