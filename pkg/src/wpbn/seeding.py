import numpy as np


def seed_sequence(seed) -> np.random.SeedSequence:
    """A fresh ``SeedSequence`` for ``seed`` (int, None, sequence or SeedSequence).

    A SeedSequence argument is copied, so spawning from the result leaves
    the caller's object untouched and repeated calls give the same children.
    """
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key, pool_size=seed.pool_size)
    return np.random.SeedSequence(seed)
