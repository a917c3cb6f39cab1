"""Deterministic sub-seed derivation from one global seed."""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, *parts) -> int:
    """Stable 63-bit sub-seed for (seed, *parts); parts may be str or int.

    Uses SHA-256 so the result is identical across processes and platforms
    (Python's builtin hash() is salted per process and unusable here).
    """
    key = ":".join([str(int(seed))] + [str(p) for p in parts])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
