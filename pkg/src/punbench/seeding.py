"""Deterministic hashing and seeding helpers.

All randomness in the package flows through these functions so that equal
inputs and equal seeds reproduce byte-identical artifacts.  Python's builtin
``hash()`` is salted per process and must never be used for anything that is
persisted or compared across runs.
"""

from __future__ import annotations

import hashlib
import random

_SEP = b"\x1f"  # unit separator; cannot collide with encoded text content


def stable_digest(*parts: object, size: int = 16) -> str:
    """Hex digest of the given parts, stable across processes and platforms.

    Parts are stringified and joined with an unprintable separator so that
    ("ab", "c") and ("a", "bc") hash differently.
    """
    h = hashlib.blake2b(digest_size=size)
    for part in parts:
        h.update(str(part).encode("utf-8"))
        h.update(_SEP)
    return h.hexdigest()


def seed_from(*parts: object) -> int:
    """A 64-bit integer seed derived from the given parts."""
    return int(stable_digest(*parts, size=8), 16)


def rng_from(*parts: object) -> random.Random:
    """A freshly seeded RNG whose stream depends only on the given parts."""
    return random.Random(seed_from(*parts))
