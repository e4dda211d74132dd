# -*- coding: utf-8 -*-
"""
Binarization, misclassification ground truth and F1.

F1 conventions for degenerate confusion matrices:
  - TP = FP = FN = 0            → precision = recall = F1 = 1
  - TP = 0 and FP + FN > 0      → F1 = 0
  - no predicted positives      → precision = 1 if FN == 0 else 0
  - no actual positives         → recall    = 1 if FP == 0 else 0
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.app.errors import LengthMismatchError
from src.app.models import Dataset, TaskName
from src.metrics.roc import ThresholdResult, youden_threshold


def binarize(scores: Sequence[float] | np.ndarray | float, threshold: float) -> np.ndarray:
    """1 where score is strictly greater than *threshold*, else 0."""
    return (np.asarray(scores, dtype=float) > threshold).astype(int)


def _paired(a: Sequence[int] | np.ndarray, b: Sequence[int] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(a, dtype=int)
    y = np.asarray(b, dtype=int)
    if x.shape != y.shape:
        raise LengthMismatchError(f"length mismatch: {x.shape} vs {y.shape}")
    return x, y


def misclass_ground_truth(
    predictions: Sequence[int] | np.ndarray, labels: Sequence[int] | np.ndarray
) -> np.ndarray:
    """1 where the binarized prediction disagrees with the label."""
    p, y = _paired(predictions, labels)
    return np.abs(p - y)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int


def confusion_counts(
    predictions: Sequence[int] | np.ndarray, labels: Sequence[int] | np.ndarray
) -> ConfusionCounts:
    p, y = _paired(predictions, labels)
    return ConfusionCounts(
        tp=int(np.sum((p == 1) & (y == 1))),
        fp=int(np.sum((p == 1) & (y == 0))),
        fn=int(np.sum((p == 0) & (y == 1))),
        tn=int(np.sum((p == 0) & (y == 0))),
    )


@dataclass(frozen=True)
class F1Score:
    precision: float
    recall: float
    f1: float


def f1_from_counts(tp: int, fp: int, fn: int) -> F1Score:
    """Precision / recall / F1 with the module's degenerate-case conventions."""
    precision = tp / (tp + fp) if tp + fp > 0 else (1.0 if fn == 0 else 0.0)
    recall = tp / (tp + fn) if tp + fn > 0 else (1.0 if fp == 0 else 0.0)
    denominator = 2 * tp + fp + fn
    f1 = 2 * tp / denominator if denominator > 0 else 1.0
    return F1Score(precision=float(precision), recall=float(recall), f1=float(f1))


def f1(predictions: Sequence[int] | np.ndarray, labels: Sequence[int] | np.ndarray) -> F1Score:
    counts = confusion_counts(predictions, labels)
    return f1_from_counts(counts.tp, counts.fp, counts.fn)


def f1_value(predictions: np.ndarray, labels: np.ndarray) -> float:
    """Fast scalar F1 for bootstrap loops."""
    tp = int(np.sum(predictions & labels))
    fp = int(np.sum(predictions & (1 - labels)))
    fn = int(np.sum((1 - predictions) & labels))
    denominator = 2 * tp + fp + fn
    return 2 * tp / denominator if denominator > 0 else 1.0


# ---------------------------------------------------------------------------
# Misclassification matrix for one (model, task)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MisclassMatrix:
    """Thresholded predictions and misclassification truth for every study."""
    model_id: str
    task: TaskName
    threshold: ThresholdResult
    predictions: np.ndarray
    misclassified: np.ndarray

    @property
    def misclassification_rate(self) -> float:
        return float(self.misclassified.mean()) if self.misclassified.size else 0.0


def ground_truth_for(
    dataset: Dataset,
    model_id: str,
    task: TaskName | str,
    fit_indices: Sequence[int] | np.ndarray | None = None,
) -> MisclassMatrix:
    """Youden threshold on *fit_indices* (all studies if None), applied to all."""
    task = TaskName(task)
    scores = dataset.scores(model_id, task)
    labels = dataset.labels(task)
    idx = np.arange(len(dataset)) if fit_indices is None else np.asarray(fit_indices, dtype=int)
    threshold = youden_threshold(scores[idx], labels[idx])
    predictions = binarize(scores, threshold.threshold)
    return MisclassMatrix(
        model_id=model_id,
        task=task,
        threshold=threshold,
        predictions=predictions,
        misclassified=misclass_ground_truth(predictions, labels),
    )
