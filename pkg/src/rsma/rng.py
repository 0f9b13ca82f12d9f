"""Seeded randomness: a named counter-based generator plus a documented seed mixer.

Every stochastic operation in the toolkit derives its values from a 64-bit
seed through these two primitives, so results are reproducible bit for bit
across runs and thread counts. Both algorithm identifiers are written into
result-file metadata.
"""
import numpy as np

RNG_ID = "numpy-Philox4x64-10"
SEED_MIX_ID = "splitmix64-v1"

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 step (Steele et al. finalizer), the 64-bit mixing function."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, *indices: int) -> int:
    """Mix a master seed with stream indices into an independent 64-bit seed."""
    x = splitmix64(master_seed & _MASK64)
    for idx in indices:
        x = splitmix64(x ^ (idx & _MASK64))
    return x


def generator(seed: int) -> np.random.Generator:
    """Counter-based generator keyed by a 64-bit seed (algorithm: RNG_ID)."""
    return np.random.Generator(np.random.Philox(key=seed & _MASK64))
