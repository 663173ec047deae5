"""Counter-based random streams keyed by (seed, purpose, index)."""

import zlib

import numpy as np


def _key_part(part: int | str) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    return int(part)


def stream(seed: int, *key: int | str) -> np.random.Generator:
    """Return an independent Philox generator for ``key`` under ``seed``.

    Two calls with the same arguments produce identical draws; different keys
    never share state, so adding a chain or a trial leaves other streams alone.
    """
    sequence = np.random.SeedSequence(
        int(seed), spawn_key=tuple(_key_part(part) for part in key)
    )
    return np.random.Generator(np.random.Philox(sequence))
