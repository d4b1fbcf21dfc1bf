"""Deterministic sub-seed derivation.

Repeated subsample draws need independent, reproducible seeds. We hash
the master seed together with the index coordinates (size index, repeat
index, layer, class label, ...) so results do not depend on evaluation
order, platform, or Python hash randomization.
"""

from __future__ import annotations

import hashlib


def derive_seed(master: int, *coords: int | str) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master)).encode())
    for c in coords:
        h.update(b"\x1f")
        h.update(str(c).encode())
    return int.from_bytes(h.digest(), "little") >> 1  # 63-bit, fits any RNG
