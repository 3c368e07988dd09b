"""Sub-seed derivation: one user seed fans out to independent streams."""

_MASK = (1 << 64) - 1


def splitmix64(seed: int, index: int = 0) -> int:
    """The ``index``-th output of a SplitMix64 generator started at ``seed``."""
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def sub_seeds(seed: int, count: int) -> list[int]:
    return [splitmix64(seed, i) for i in range(count)]
