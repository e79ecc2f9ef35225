from SkewLab.constants import RawEnum


class Regimes(str, RawEnum):
    WEAK_C1 = "weak_c1"
    CONSTANT_C2 = "constant_c2"
    HANKEL = "hankel"
    IID = "iid"


class EntryDistributions(str, RawEnum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"


# Regimes whose construction stays valid with +-1 entries
RADEMACHER_REGIMES = (Regimes.HANKEL, Regimes.IID)

# Regimes whose limiting spectral distribution is the semicircle
SEMICIRCLE_REGIMES = (Regimes.WEAK_C1, Regimes.IID)
