"""Deterministic seed derivation.

Every stochastic object in an experiment draws from a seed derived from the
master seed plus a label path, so any window can be regenerated in isolation
and parallel workers never share RNG state.

Rule: seed = little-endian uint64 of the first 8 bytes of
SHA-256("prachlab\\0" + "/".join(str(part) for part in parts)).
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(*parts: object) -> int:
    """Collapse a label path into a uint64 seed."""
    text = "/".join(str(p) for p in parts)
    digest = hashlib.sha256(b"prachlab\0" + text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def rng_for(*parts: object) -> np.random.Generator:
    """A PCG64 generator seeded from the label path."""
    return np.random.default_rng(derive_seed(*parts))
