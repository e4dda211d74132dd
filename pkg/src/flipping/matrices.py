# -*- coding: utf-8 -*-
"""
Confusion sub-matrices of a flip and the flipping rule.

Cell names read ``<partition><disease><misclassified><flipped>``:

    K  flipped studies        R  studies left alone
    n  label 0 (no disease)   p  label 1 (disease)

so ``kn11`` counts no-disease studies that were misclassified and flipped,
``rp00`` disease studies predicted correctly and left alone.  Flipping
turns every K-cell's misclassification digit around, which gives F1 before
and after in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.app.errors import LengthMismatchError
from src.metrics.classification import f1_from_counts


@dataclass(frozen=True)
class FlipSubMatrices:
    kn01: int = 0
    kn11: int = 0
    kp01: int = 0
    kp11: int = 0
    rn00: int = 0
    rn10: int = 0
    rp00: int = 0
    rp10: int = 0

    def __post_init__(self) -> None:
        for name, value in self.as_dict().items():
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value}")

    def as_dict(self) -> dict[str, int]:
        return {
            "kn01": self.kn01, "kn11": self.kn11, "kp01": self.kp01, "kp11": self.kp11,
            "rn00": self.rn00, "rn10": self.rn10, "rp00": self.rp00, "rp10": self.rp10,
        }

    @property
    def k(self) -> int:
        return self.kn01 + self.kn11 + self.kp01 + self.kp11

    @property
    def total(self) -> int:
        return self.k + self.rn00 + self.rn10 + self.rp00 + self.rp10

    @property
    def top_k_precision(self) -> float:
        """Share of flipped studies that were truly misclassified (0 when k = 0)."""
        return (self.kn11 + self.kp11) / self.k if self.k else 0.0


def top_k_indices(likelihoods: Sequence[float] | np.ndarray, k: int) -> np.ndarray:
    """Indices of the *k* highest likelihoods; ties go to the lower index."""
    values = np.asarray(likelihoods, dtype=float)
    order = np.lexsort((np.arange(values.size), -values))
    return np.sort(order[:k])


def sub_matrices(
    predictions: Sequence[int] | np.ndarray,
    labels: Sequence[int] | np.ndarray,
    misclass_truth: Sequence[int] | np.ndarray,
    likelihoods: Sequence[float] | np.ndarray,
    k: int,
) -> FlipSubMatrices:
    """Fill the eight cells when the top-*k* studies by likelihood are flipped.

    *predictions* is only checked for length: the cells depend on the label
    and the misclassification truth.
    """
    lik = np.asarray(likelihoods, dtype=float)
    n = lik.size
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    flipped = np.zeros(n, dtype=bool)
    flipped[top_k_indices(lik, k)] = True
    return masked_sub_matrices(predictions, labels, misclass_truth, flipped)


def masked_sub_matrices(
    predictions: Sequence[int] | np.ndarray,
    labels: Sequence[int] | np.ndarray,
    misclass_truth: Sequence[int] | np.ndarray,
    flipped: Sequence[bool] | np.ndarray,
) -> FlipSubMatrices:
    """Fill the eight cells for an explicit flipped / left-alone partition."""
    pred = np.asarray(predictions, dtype=int)
    y = np.asarray(labels, dtype=int)
    m = np.asarray(misclass_truth, dtype=int)
    part = np.asarray(flipped, dtype=bool)
    if not (pred.shape == y.shape == m.shape == part.shape):
        raise LengthMismatchError(
            f"length mismatch: predictions {pred.shape}, labels {y.shape}, "
            f"truth {m.shape}, flipped {part.shape}"
        )

    def count(side: np.ndarray, label: int, wrong: int) -> int:
        return int(np.sum(side & (y == label) & (m == wrong)))

    kept = ~part
    return FlipSubMatrices(
        kn01=count(part, 0, 0),
        kn11=count(part, 0, 1),
        kp01=count(part, 1, 0),
        kp11=count(part, 1, 1),
        rn00=count(kept, 0, 0),
        rn10=count(kept, 0, 1),
        rp00=count(kept, 1, 0),
        rp10=count(kept, 1, 1),
    )


def flipping_rule(m: FlipSubMatrices) -> bool:
    """Flip only if most flips fix an error and no more disease studies are broken than fixed."""
    return (m.kn11 + m.kp11 > m.kn01 + m.kp01) and (m.kp11 >= m.kp01)


@dataclass(frozen=True)
class F1Change:
    f1_before: float
    f1_after: float

    @property
    def change(self) -> float:
        return self.f1_after - self.f1_before


def f1_after_from_matrices(m: FlipSubMatrices) -> F1Change:
    before = f1_from_counts(tp=m.kp01 + m.rp00, fp=m.kn11 + m.rn10, fn=m.kp11 + m.rp10)
    after = f1_from_counts(tp=m.kp11 + m.rp00, fp=m.kn01 + m.rn10, fn=m.kp01 + m.rp10)
    return F1Change(f1_before=before.f1, f1_after=after.f1)
