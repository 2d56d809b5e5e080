"""Deterministic seed derivation and the vectorized noise generator.

Every random draw in the pipeline descends from a 64-bit master seed via
the SplitMix64 finalizer, so images can be generated in any order, on any
number of workers, and still come out bit-identical.  The mixing function
is frozen and documented in docs/formats.md; changing it is a format break.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1

# SplitMix64 constants (Steele, Lea & Flood / Vigna).
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 avalanche finalizer; a bijection on 64-bit integers."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_image_seed(master_seed: int, image_index: int) -> int:
    """Per-image seed: mix64(master_seed XOR (image_index + 1) * gamma).

    Pure, stable across releases, and injective in image_index for a fixed
    master seed (odd-constant multiplication and mix64 are both bijections).
    """
    if image_index < 0:
        raise ValueError("image_index must be non-negative")
    return mix64((master_seed & MASK64) ^ (((image_index + 1) * _GAMMA) & MASK64))


def stream_salt(label: str) -> int:
    """Stable 64-bit salt for a named draw stream.

    First 8 bytes (big-endian) of sha256("aeroforge.stream." + label), so
    adding a new stream never perturbs existing ones.
    """
    digest = hashlib.sha256(b"aeroforge.stream." + label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def stream_seed(image_seed: int, label: str) -> int:
    """Seed for one named per-image stream (scenario, background, per-class)."""
    return mix64((image_seed & MASK64) ^ stream_salt(label))


def noise_offsets(seed: int, n: int, amplitude: int) -> np.ndarray:
    """n deterministic integer offsets in [-amplitude, +amplitude].

    Counter-based (SplitMix64 over the element index), vectorized in uint64,
    so the result depends only on (seed, n, amplitude) and never on numpy's
    RNG streams.  Modulo bias over 2**64 is negligible for byte-scale
    amplitudes.
    """
    if amplitude < 0:
        raise ValueError("amplitude must be >= 0")
    if amplitude == 0:
        return np.zeros(n, dtype=np.int16)
    idx = np.arange(1, n + 1, dtype=np.uint64)
    z = (np.uint64(seed & MASK64) + idx * np.uint64(_GAMMA))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    span = np.uint64(2 * amplitude + 1)
    return (z % span).astype(np.int16) - np.int16(amplitude)
