# -*- coding: utf-8 -*-
"""
Flipping Package
Confusion sub-matrices, the flipping rule and the top-k flipping search.
"""

from src.flipping.matrices import (
    FlipSubMatrices, f1_after_from_matrices, flipping_rule, masked_sub_matrices, sub_matrices
)
from src.flipping.search import FlipOutcome, apply_flip, flip_search

__all__ = [
    "FlipSubMatrices",
    "f1_after_from_matrices",
    "flipping_rule",
    "masked_sub_matrices",
    "sub_matrices",
    "FlipOutcome",
    "apply_flip",
    "flip_search",
]
