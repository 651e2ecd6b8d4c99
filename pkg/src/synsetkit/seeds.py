"""Seed derivation.

Every stage draws its seed from the single top-level seed by hashing the
stage name into it, so adding or removing a stage leaves the others' random
streams untouched.
"""

import hashlib

from ._pure import MASK64, splitmix64


def derive_seed(seed, *parts):
    """Stable 64-bit seed for ``(seed, *parts)``."""
    key = "\x1f".join([str(int(seed))] + [str(p) for p in parts]).encode("utf-8")
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little")


def item_seed(base, i):
    """Cheap per-item seed (e.g. one per word) from a stage seed."""
    return splitmix64((base ^ (i * 0x9E3779B97F4A7C15)) & MASK64)[1]
