# -*- coding: utf-8 -*-
"""
Data Models for flipaudit
Core data structures for studies, labels, model outputs and cohorts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Dict, Mapping, Sequence, Tuple

import numpy as np

from src.app.errors import SchemaError
from src.config.constants import CLINICAL_FEATURES

if TYPE_CHECKING:
    from src.app.hierarchy import LabelHierarchy


class TaskName(str, Enum):
    """The five diseases the audited models predict."""
    ATELECTASIS = "Atelectasis"
    CARDIOMEGALY = "Cardiomegaly"
    PLEURAL_EFFUSION = "Pleural Effusion"
    CONSOLIDATION = "Consolidation"
    EDEMA = "Edema"

    def __str__(self) -> str:
        return self.value


class FindingName(str, Enum):
    """The fourteen radiological findings labelled per study."""
    NO_FINDING = "No Finding"
    ENLARGED_CARDIOMEDIASTINUM = "Enlarged Cardiomediastinum"
    CARDIOMEGALY = "Cardiomegaly"
    LUNG_OPACITY = "Lung Opacity"
    LUNG_LESION = "Lung Lesion"
    EDEMA = "Edema"
    CONSOLIDATION = "Consolidation"
    PNEUMONIA = "Pneumonia"
    ATELECTASIS = "Atelectasis"
    PNEUMOTHORAX = "Pneumothorax"
    PLEURAL_EFFUSION = "Pleural Effusion"
    PLEURAL_OTHER = "Pleural Other"
    FRACTURE = "Fracture"
    SUPPORT_DEVICES = "Support Devices"

    def __str__(self) -> str:
        return self.value


OutputKey = Tuple[str, TaskName]


@dataclass(frozen=True)
class StudyRecord:
    """One study: clinical features, finding labels and model output scores."""

    study_id: str
    age: float
    sex: int
    has_lateral_view: bool
    num_ap_views: int
    num_pa_views: int
    labels: Mapping[FindingName, int]
    outputs: Mapping[OutputKey, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.study_id:
            raise SchemaError("empty study_id")
        if not math.isfinite(self.age) or self.age < 0:
            raise SchemaError(f"study {self.study_id}: age must be a non-negative number, got {self.age}")
        if self.sex not in (0, 1):
            raise SchemaError(f"study {self.study_id}: sex must be 0 or 1, got {self.sex}")
        if self.num_ap_views < 0 or self.num_pa_views < 0:
            raise SchemaError(f"study {self.study_id}: view counts must be >= 0")
        if not self.has_lateral_view and self.num_ap_views + self.num_pa_views == 0:
            raise SchemaError(f"study {self.study_id}: no views present")
        if set(self.labels) != set(FindingName) or len(self.labels) != len(FindingName):
            missing = sorted(f.value for f in set(FindingName) - set(self.labels))
            raise SchemaError(f"study {self.study_id}: missing finding labels {missing}")
        for finding, value in self.labels.items():
            if value not in (0, 1):
                raise SchemaError(f"study {self.study_id}: label {finding.value} must be 0 or 1, got {value}")
        for (model_id, task), score in self.outputs.items():
            if not (0.0 <= score <= 1.0):
                raise SchemaError(
                    f"study {self.study_id}: score {score} for ({model_id}, {task.value}) outside [0, 1]"
                )

    def clinical_vector(self) -> np.ndarray:
        """Clinical features in :data:`CLINICAL_FEATURES` order."""
        return np.array(
            [
                self.age,
                self.sex,
                float(self.has_lateral_view),
                self.num_ap_views,
                self.num_pa_views,
            ],
            dtype=float,
        )

    def score(self, model_id: str, task: TaskName | str) -> float:
        return self.outputs[(model_id, TaskName(task))]


@dataclass(frozen=True)
class Dataset:
    """An immutable cohort: ordered studies, ordered model ids, hierarchy.

    Vectorised read-only views (labels, scores, clinical matrix) are built
    once at construction time and shared by every analysis.
    """

    studies: Tuple[StudyRecord, ...]
    model_ids: Tuple[str, ...]
    hierarchy: LabelHierarchy

    _labels: Dict[FindingName, np.ndarray] = field(init=False, repr=False, compare=False)
    _scores: Dict[OutputKey, np.ndarray] = field(init=False, repr=False, compare=False)
    _clinical: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "studies", tuple(self.studies))
        object.__setattr__(self, "model_ids", tuple(self.model_ids))

        seen: set[str] = set()
        for study in self.studies:
            if study.study_id in seen:
                raise SchemaError(f"duplicate study_id {study.study_id}")
            seen.add(study.study_id)

        expected = {(m, t) for m in self.model_ids for t in TaskName}
        for study in self.studies:
            keys = set(study.outputs)
            if keys != expected:
                missing = sorted((m, t.value) for m, t in expected - keys)
                extra = sorted((m, t.value) for m, t in keys - expected)
                raise SchemaError(
                    f"study {study.study_id}: output keys differ from model set "
                    f"(missing {missing[:3]}, unexpected {extra[:3]})"
                )

        labels = {
            f: _frozen(np.array([s.labels[f] for s in self.studies], dtype=int))
            for f in FindingName
        }
        scores = {
            key: _frozen(np.array([s.outputs[key] for s in self.studies], dtype=float))
            for key in sorted(expected, key=lambda k: (self.model_ids.index(k[0]), _task_index(k[1])))
        }
        clinical = np.vstack([s.clinical_vector() for s in self.studies]) if self.studies else np.empty((0, len(CLINICAL_FEATURES)))
        object.__setattr__(self, "_labels", labels)
        object.__setattr__(self, "_scores", scores)
        object.__setattr__(self, "_clinical", _frozen(clinical))

    # ------------------------------------------------------------------ #
    # Accessors
    # ------------------------------------------------------------------ #

    def __len__(self) -> int:
        return len(self.studies)

    @property
    def shape(self) -> Tuple[int, int]:
        """(number of studies, number of models)."""
        return len(self.studies), len(self.model_ids)

    @property
    def study_ids(self) -> Tuple[str, ...]:
        return tuple(s.study_id for s in self.studies)

    def labels(self, finding: FindingName | TaskName | str) -> np.ndarray:
        return self._labels[FindingName(str(finding))]

    def scores(self, model_id: str, task: TaskName | str) -> np.ndarray:
        return self._scores[(model_id, TaskName(task))]

    def clinical_matrix(self) -> np.ndarray:
        """(n_studies, 5) matrix in :data:`CLINICAL_FEATURES` order."""
        return self._clinical

    def subset(self, indices: Sequence[int] | np.ndarray) -> "Dataset":
        """Return a new Dataset holding only the studies at *indices*."""
        return Dataset(
            studies=tuple(self.studies[int(i)] for i in indices),
            model_ids=self.model_ids,
            hierarchy=self.hierarchy,
        )


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _task_index(task: TaskName) -> int:
    return list(TaskName).index(task)


@dataclass(frozen=True)
class CohortSummary:
    """Descriptive statistics rendered into the report digest."""
    n_studies: int
    n_models: int
    age_mean: float
    age_sd: float
    male_fraction: float
    lateral_fraction: float
    prevalence: Dict[str, float]


def cohort_summary(dataset: Dataset) -> CohortSummary:
    """Summarise the cohort: size, demographics and finding prevalence."""
    clinical = dataset.clinical_matrix()
    n = len(dataset)
    if n == 0:
        return CohortSummary(0, len(dataset.model_ids), math.nan, math.nan, math.nan, math.nan, {})
    return CohortSummary(
        n_studies=n,
        n_models=len(dataset.model_ids),
        age_mean=float(clinical[:, 0].mean()),
        age_sd=float(clinical[:, 0].std(ddof=1)) if n > 1 else 0.0,
        male_fraction=float(clinical[:, 1].mean()),
        lateral_fraction=float(clinical[:, 2].mean()),
        prevalence={f.value: float(dataset.labels(f).mean()) for f in FindingName},
    )

