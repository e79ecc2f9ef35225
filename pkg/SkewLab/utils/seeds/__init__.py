import numpy as np


def seed_sequence(seed, *keys):
    """
    Build the SeedSequence for a master seed and a path of integer keys.

    The keys play the role of a spawn path, so (seed, n, r) and (seed, n', r) give
    independent streams and nothing is consumed in sequence.
    """
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))


def derive_seed(seed, *keys):
    return int(seed_sequence(seed, *keys).generate_state(1, dtype=np.uint64)[0])


def rng_for(seed, *keys):
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *keys)))
