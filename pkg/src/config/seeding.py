# -*- coding: utf-8 -*-
"""
Labeled seed derivation.

Every random stream in flipaudit is seeded from the master seed plus a
label path (module name, model id, task, split index, ...), never from a
shared mutable generator.  Reordering or parallelising work therefore
cannot change any result.
"""

from __future__ import annotations

import hashlib

import numpy as np

_SEED_MASK = (1 << 63) - 1


def derive_seed(master: int, *labels: object) -> int:
    """Return a 63-bit seed for *labels* under *master*."""
    key = "|".join([str(int(master)), *(str(label) for label in labels)])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & _SEED_MASK


def derive_rng(master: int, *labels: object) -> np.random.Generator:
    """Shorthand for ``np.random.default_rng(derive_seed(master, *labels))``."""
    return np.random.default_rng(derive_seed(master, *labels))
