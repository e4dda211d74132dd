# -*- coding: utf-8 -*-
"""
Metrics Package
AUROC, Youden thresholds, misclassification ground truth, F1 and bootstrap intervals.
"""

from src.metrics.roc import ThresholdResult, auroc, youden_threshold
from src.metrics.classification import (
    MisclassMatrix, binarize, confusion_counts, f1, ground_truth_for, misclass_ground_truth
)
from src.metrics.bootstrap import BootstrapCI, bootstrap_ci

__all__ = [
    "ThresholdResult",
    "auroc",
    "youden_threshold",
    "MisclassMatrix",
    "binarize",
    "confusion_counts",
    "f1",
    "ground_truth_for",
    "misclass_ground_truth",
    "BootstrapCI",
    "bootstrap_ci",
]
