# -*- coding: utf-8 -*-
"""
Feature layouts for the misclassification identifiers.

    naive          model score for the task (ranked by distance to threshold)
    clinical_only  age, sex, has_lateral_view, num_ap_views, num_pa_views
    same_label     clinical block + score for the task
    all_labels     clinical block + score for the task + the other four task
                   scores in TaskName order

``same_label`` is a prefix of ``all_labels``, so any column index valid for
the former means the same thing in the latter.
"""

from __future__ import annotations

from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from src.app.errors import SchemaError
from src.app.models import Dataset, StudyRecord, TaskName
from src.config.constants import CLINICAL_FEATURES


class IdentifierKind(str, Enum):
    NAIVE = "naive"
    CLINICAL_ONLY = "clinical_only"
    SAME_LABEL = "same_label"
    ALL_LABELS = "all_labels"

    def __str__(self) -> str:
        return self.value

    @property
    def trained(self) -> bool:
        return self is not IdentifierKind.NAIVE


def _score_column(task: TaskName) -> str:
    return f"score:{task.value}"


def _score_tasks(kind: IdentifierKind, task: TaskName) -> Tuple[TaskName, ...]:
    if kind in (IdentifierKind.NAIVE, IdentifierKind.SAME_LABEL):
        return (task,)
    if kind is IdentifierKind.ALL_LABELS:
        return (task, *(t for t in TaskName if t is not task))
    return ()


def feature_names(kind: IdentifierKind | str, task: TaskName | str) -> Tuple[str, ...]:
    """Column names of the feature vector, in layout order."""
    kind = IdentifierKind(kind)
    task = TaskName(task)
    clinical = () if kind is IdentifierKind.NAIVE else CLINICAL_FEATURES
    return (*clinical, *(_score_column(t) for t in _score_tasks(kind, task)))


def build_features(
    study: StudyRecord, kind: IdentifierKind | str, model_id: str, task: TaskName | str
) -> np.ndarray:
    """Feature vector of one study for an identifier of *kind*."""
    kind = IdentifierKind(kind)
    task = TaskName(task)
    scores = []
    for t in _score_tasks(kind, task):
        try:
            scores.append(study.score(model_id, t))
        except KeyError:
            raise SchemaError(
                f"study {study.study_id} has no score for ({model_id}, {t.value})"
            ) from None
    if kind is IdentifierKind.NAIVE:
        return np.array(scores, dtype=float)
    return np.concatenate([study.clinical_vector(), np.array(scores, dtype=float)])


def feature_matrix(
    dataset: Dataset,
    kind: IdentifierKind | str,
    model_id: str,
    task: TaskName | str,
    indices: Optional[Sequence[int] | np.ndarray] = None,
) -> np.ndarray:
    """Row-stacked :func:`build_features` over *dataset*, vectorised."""
    kind = IdentifierKind(kind)
    task = TaskName(task)
    if model_id not in dataset.model_ids:
        raise SchemaError(f"unknown model_id {model_id!r}")
    columns = [dataset.scores(model_id, t) for t in _score_tasks(kind, task)]
    if kind is not IdentifierKind.NAIVE:
        columns = [*dataset.clinical_matrix().T, *columns]
    X = np.column_stack(columns).astype(float) if columns else np.empty((len(dataset), 0))
    if indices is not None:
        X = X[np.asarray(indices, dtype=int)]
    return X
