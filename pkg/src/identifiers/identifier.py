# -*- coding: utf-8 -*-
"""
Misclassification identifiers: classifiers predicting that a model's
thresholded prediction for a study is wrong.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.app.errors import DegenerateTargetError
from src.app.models import Dataset, TaskName
from src.identifiers.backends import ClassifierBackendSpec, FittedClassifier, fit_backend
from src.identifiers.features import IdentifierKind, feature_matrix, feature_names
from src.metrics.classification import ground_truth_for
from src.metrics.roc import ThresholdResult

logger = logging.getLogger(__name__)


def naive_score(score: float | np.ndarray, threshold: float) -> float | np.ndarray:
    """Untrained baseline: −|score − threshold|, larger means more suspect."""
    result = -np.abs(np.asarray(score, dtype=float) - threshold)
    return float(result) if result.ndim == 0 else result


@dataclass(frozen=True)
class TrainedIdentifier:
    kind: IdentifierKind
    model_id: str
    task: TaskName
    backend: Optional[FittedClassifier]
    threshold_used: ThresholdResult

    @property
    def feature_names(self) -> tuple[str, ...]:
        return feature_names(self.kind, self.task)

    def predict_matrix(self, X: np.ndarray) -> np.ndarray:
        """Likelihoods for pre-built feature rows of this identifier's kind."""
        X = np.asarray(X, dtype=float)
        if self.backend is None:
            return naive_score(X[:, 0], self.threshold_used.threshold)
        return self.backend.predict_proba(X)

    def predict(self, dataset: Dataset, indices: Optional[Sequence[int] | np.ndarray] = None) -> np.ndarray:
        """Misclassification likelihood of each study in *indices*."""
        return self.predict_matrix(feature_matrix(dataset, self.kind, self.model_id, self.task, indices))


def naive_identifier(model_id: str, task: TaskName | str, threshold: ThresholdResult) -> TrainedIdentifier:
    return TrainedIdentifier(IdentifierKind.NAIVE, model_id, TaskName(task), None, threshold)


def train_identifier(
    dataset: Dataset,
    train_indices: Sequence[int] | np.ndarray,
    kind: IdentifierKind | str,
    model_id: str,
    task: TaskName | str,
    backend: Optional[ClassifierBackendSpec] = None,
    seed: int = 0,
) -> TrainedIdentifier:
    """Fit an identifier on the train fold's own misclassification truth.

    The Youden threshold is picked on the train fold; the target is whether
    the fold's thresholded prediction disagrees with the label.
    """
    kind = IdentifierKind(kind)
    task = TaskName(task)
    if not kind.trained:
        raise ValueError("the naive identifier is not trained; use naive_identifier()")
    backend = backend or ClassifierBackendSpec()
    train = np.asarray(train_indices, dtype=int)
    truth = ground_truth_for(dataset, model_id, task, train)
    target = truth.misclassified[train]
    n_wrong = int(target.sum())
    if n_wrong == 0 or n_wrong == target.size:
        raise DegenerateTargetError(
            f"{model_id}/{task.value}: train fold has {n_wrong} misclassified of {target.size}"
        )
    X = feature_matrix(dataset, kind, model_id, task, train)
    fitted = fit_backend(backend, X, target, seed)
    logger.debug(
        "Trained %s identifier for %s/%s on %d studies (%d misclassified)",
        kind.value, model_id, task.value, target.size, n_wrong,
    )
    return TrainedIdentifier(kind, model_id, task, fitted, truth.threshold)
