"""Counter-based random streams.

Every random quantity is a pure function of ``(seed, counter)`` so results
do not depend on evaluation order or on how work is split across workers.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def splitmix64(x):
    """SplitMix64 finaliser, vectorised over uint64 arrays (wrapping arithmetic)."""
    z = np.asarray(x, dtype=np.uint64) + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def mix(*parts: int) -> int:
    """Stable 64-bit mix of a tuple of integers."""
    h = np.zeros(1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        for p in parts:
            h = splitmix64(h ^ np.uint64(int(p) & _MASK))
    return int(h[0])


def uniforms(key: int, counters) -> np.ndarray:
    """Uniform(0, 1) doubles, one per counter, from stream ``key``."""
    c = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = splitmix64(c ^ np.uint64(key))
        z = splitmix64(z)
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def generator(*parts: int) -> np.random.Generator:
    """numpy Generator seeded from a stable mix of ``parts``."""
    return np.random.default_rng(mix(*parts))


def fresh_seed() -> int:
    return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
