"""Deterministic random number generation.

All stochastic corruption effects draw from numpy's Philox bit generator, a
counter-based 64-bit PRNG whose streams are stable across platforms and numpy
releases. Seeds for individual evaluation cells are derived with BLAKE2b so
they do not depend on execution order or worker count.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def generator(seed: int) -> np.random.Generator:
    """Philox generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=seed & MASK64))


def derive_seed(*parts: object) -> int:
    """Stable 64-bit seed from a tuple of hashable parts.

    Parts are joined with an unambiguous separator and hashed with BLAKE2b
    (8-byte digest). Used to key one corruption instance per
    (master seed, sample id, kind, severity, rep) cell.
    """
    payload = "\x1f".join(str(p) for p in parts).encode("utf-8")
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    return int.from_bytes(digest, "big")
