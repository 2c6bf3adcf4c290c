"""Seed derivation so results do not depend on evaluation order or parallelism."""

from __future__ import annotations

import zlib

import numpy as np


def _key_to_int(key: object) -> int:
    if isinstance(key, (int, np.integer)):
        return int(key) & 0xFFFFFFFF
    return zlib.crc32(str(key).encode("utf-8"))


def derive_seed(seed: int, *keys: object) -> int:
    """Derive a child seed from a master seed and any number of labels."""
    entropy = [int(seed) & 0xFFFFFFFF] + [_key_to_int(k) for k in keys]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def make_rng(seed: int, *keys: object) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *keys) if keys else seed)


def spawn_seeds(seed: int, n: int) -> list[int]:
    """n independent child seeds, identical for a given master seed."""
    children = np.random.SeedSequence(int(seed) & 0xFFFFFFFF).spawn(n)
    return [int(c.generate_state(1)[0]) for c in children]
