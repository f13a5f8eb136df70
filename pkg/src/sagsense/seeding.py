"""Keyed random streams.

Every random draw in a Monte-Carlo run comes from a generator addressed by
``(seed, *key)``, so a trial's numbers do not depend on which other trials
ran before it or in which process.
"""

import numpy as np

# Stream purposes. Kept as small ints so keys stay stable across versions.
AIRCRAFT_POSITIONS = 0
A2G_FADING = 1
STRATEGY = 2


def trial_seed(base_seed, trial):
    """32-bit seed identifying one Monte-Carlo trial."""
    ss = np.random.SeedSequence(entropy=int(base_seed), spawn_key=(int(trial),))
    return int(ss.generate_state(1, np.uint32)[0])


def stream(seed, *key):
    """Independent generator for ``(seed, *key)``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))
