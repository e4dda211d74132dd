# -*- coding: utf-8 -*-
"""
ROC analysis: AUROC and Youden-optimal thresholds.

Candidate cut-points are the midpoints between consecutive distinct scores
plus the −∞ / +∞ sentinels; a study is predicted positive when its score is
strictly greater than the cut-point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.stats import rankdata

from src.app.errors import DegenerateLabelsError, LengthMismatchError


@dataclass(frozen=True)
class ThresholdResult:
    """A Youden-optimal cut-point and its operating characteristics."""
    threshold: float
    youden_j: float
    sensitivity: float
    specificity: float


def _validate(scores: Sequence[float] | np.ndarray, labels: Sequence[int] | np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=int)
    if s.shape != y.shape or s.ndim != 1:
        raise LengthMismatchError(f"scores and labels differ in shape: {s.shape} vs {y.shape}")
    n_pos = int(y.sum())
    if n_pos == 0 or n_pos == y.size:
        raise DegenerateLabelsError(
            f"AUROC undefined: need both classes, got {n_pos} positives of {y.size}"
        )
    return s, y


def auroc(scores: Sequence[float] | np.ndarray, labels: Sequence[int] | np.ndarray) -> float:
    """Probability that a random positive outranks a random negative (ties ½)."""
    s, y = _validate(scores, labels)
    ranks = rankdata(s)
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    u = ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def _cut_points(s: np.ndarray) -> np.ndarray:
    distinct = np.unique(s)
    midpoints = (distinct[:-1] + distinct[1:]) / 2.0
    return np.concatenate(([-np.inf], midpoints, [np.inf]))


def _counts_above(s: np.ndarray, y: np.ndarray, cuts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """True / false positive counts for ``score > cut`` at every cut."""
    pos = np.sort(s[y == 1])
    neg = np.sort(s[y == 0])
    tp = pos.size - np.searchsorted(pos, cuts, side="right")
    fp = neg.size - np.searchsorted(neg, cuts, side="right")
    return tp, fp


def youden_threshold(
    scores: Sequence[float] | np.ndarray, labels: Sequence[int] | np.ndarray
) -> ThresholdResult:
    """Cut-point maximising J = TPR − FPR; ties go to the smallest cut-point."""
    s, y = _validate(scores, labels)
    cuts = _cut_points(s)
    tp, fp = _counts_above(s, y, cuts)
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    # J scaled by n_pos * n_neg stays integral, so ties compare exactly
    scaled = tp.astype(np.int64) * n_neg - fp.astype(np.int64) * n_pos
    best = int(np.argmax(scaled))
    tpr = tp[best] / n_pos
    fpr = fp[best] / n_neg
    return ThresholdResult(
        threshold=float(cuts[best]),
        youden_j=float(scaled[best] / (n_pos * n_neg)),
        sensitivity=float(tpr),
        specificity=float(1.0 - fpr),
    )
