"""Deterministic, splittable random streams.

Every stream is a pure function of its path (a tuple of ints/strings/floats):
the path is hashed into a 128-bit Philox key, so bootstrap replicates and
Monte Carlo cells can run in any order, on any number of workers, and still
produce bit-identical draws.  No generator state is ever shared or advanced
across tasks.
"""
from __future__ import annotations

import hashlib

import numpy as np

_SEP = b"\x1f"


def _encode(parts: tuple) -> bytes:
    chunks = []
    for p in parts:
        if isinstance(p, (bool, np.bool_)):
            chunks.append(b"b:%d" % int(p))
        elif isinstance(p, (int, np.integer)):
            chunks.append(b"i:%d" % int(p))
        elif isinstance(p, float):
            chunks.append(b"f:" + repr(p).encode("ascii"))
        elif isinstance(p, str):
            chunks.append(b"s:" + p.encode("utf-8"))
        else:
            raise TypeError(f"unsupported stream path part: {p!r}")
    return _SEP.join(chunks)


def stable_key(*parts) -> int:
    """128-bit integer key derived from a canonical hash of the path."""
    digest = hashlib.sha256(_encode(parts)).digest()
    return int.from_bytes(digest[:16], "little")


def stable_seed(*parts) -> int:
    """Nonnegative 63-bit integer seed derived from the path."""
    return stable_key(*parts) & (2**63 - 1)


def substream(*parts) -> np.random.Generator:
    """Counter-based generator for the given path.

    Philox is counter-based: constructing it from a key is O(1) and streams
    with distinct keys are statistically independent.
    """
    return np.random.Generator(np.random.Philox(key=stable_key(*parts)))
