# -*- coding: utf-8 -*-
"""
Design matrices for the misclassification audits.

Three feature families:
  clinical              - age, sex, lateral view, #AP views, #PA views
  findings              - indicator per finding, minus the task's
                          hierarchy closure
  age_plus_comorbidity  - age and the number of positive findings other
                          than No Finding and the task itself
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Optional, Sequence, Tuple

import numpy as np

from src.app.hierarchy import LabelHierarchy
from src.app.models import Dataset, FindingName, StudyRecord, TaskName
from src.config.constants import CLINICAL_FEATURES

COMORBIDITY_COUNT = "comorbidity_count"


class FeatureKind(str, Enum):
    CLINICAL = "clinical"
    FINDINGS = "findings"
    AGE_PLUS_COMORBIDITY = "age_plus_comorbidity"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DesignSpec:
    """Ordered feature names for one (kind, task); intercept is implicit."""
    feature_kind: FeatureKind
    task: TaskName
    feature_names: Tuple[str, ...]
    excluded: FrozenSet[FindingName] = frozenset()


def design_spec(kind: FeatureKind | str, task: TaskName | str, hierarchy: LabelHierarchy) -> DesignSpec:
    kind = FeatureKind(kind)
    task = TaskName(task)
    if kind is FeatureKind.CLINICAL:
        return DesignSpec(kind, task, CLINICAL_FEATURES)
    if kind is FeatureKind.FINDINGS:
        excluded = hierarchy.excluded_features(task)
        names = tuple(f.value for f in FindingName if f not in excluded)
        return DesignSpec(kind, task, names, excluded)
    return DesignSpec(kind, task, ("age", COMORBIDITY_COUNT))


def comorbidity_count(study: StudyRecord, task: TaskName | str) -> int:
    """Positive findings other than No Finding and the task disease."""
    skip = {FindingName.NO_FINDING, FindingName(TaskName(task).value)}
    return sum(value for finding, value in study.labels.items() if finding not in skip)


def comorbidity_counts(dataset: Dataset, task: TaskName | str) -> np.ndarray:
    skip = {FindingName.NO_FINDING, FindingName(TaskName(task).value)}
    total = np.zeros(len(dataset), dtype=int)
    for finding in FindingName:
        if finding not in skip:
            total += dataset.labels(finding)
    return total


def design_matrix(
    dataset: Dataset,
    spec: DesignSpec,
    indices: Optional[Sequence[int] | np.ndarray] = None,
) -> np.ndarray:
    """(n, len(spec.feature_names)) matrix, rows restricted to *indices*."""
    if spec.feature_kind is FeatureKind.CLINICAL:
        X = np.asarray(dataset.clinical_matrix(), dtype=float)
    elif spec.feature_kind is FeatureKind.FINDINGS:
        X = np.column_stack([dataset.labels(name) for name in spec.feature_names]).astype(float)
    else:
        X = np.column_stack(
            [dataset.clinical_matrix()[:, 0], comorbidity_counts(dataset, spec.task)]
        ).astype(float)
    if indices is not None:
        X = X[np.asarray(indices, dtype=int)]
    return X
