# -*- coding: utf-8 -*-
"""Tests for src.app.models - studies, datasets and cohort summaries."""

from __future__ import annotations

import numpy as np
import pytest

from src.app.errors import SchemaError
from src.app.hierarchy import LabelHierarchy
from src.app.models import (
    Dataset,
    FindingName,
    StudyRecord,
    TaskName,
    cohort_summary,
)
from src.config.constants import CLINICAL_FEATURES, FINDING_NAMES, TASK_NAMES
from tests.conftest import make_labels, make_study


# ------------------------------------------------------------------ #
# Enums
# ------------------------------------------------------------------ #

class TestNames:

    def test_five_tasks_fourteen_findings(self) -> None:
        assert len(TaskName) == 5
        assert len(FindingName) == 14

    def test_enums_follow_constant_tables(self) -> None:
        assert tuple(t.value for t in TaskName) == TASK_NAMES
        assert tuple(f.value for f in FindingName) == FINDING_NAMES

    def test_every_task_is_a_finding(self) -> None:
        for task in TaskName:
            assert FindingName(task.value).value == task.value

    def test_str_is_value(self) -> None:
        assert str(TaskName.PLEURAL_EFFUSION) == "Pleural Effusion"


# ------------------------------------------------------------------ #
# StudyRecord
# ------------------------------------------------------------------ #

class TestStudyRecord:

    def test_clinical_vector_order(self) -> None:
        study = make_study(age=71, sex=0, has_lateral_view=True, num_ap_views=2, num_pa_views=1)
        assert list(study.clinical_vector()) == [71.0, 0.0, 1.0, 2.0, 1.0]
        assert len(CLINICAL_FEATURES) == 5

    def test_score_lookup(self) -> None:
        outputs = {("m1", t): 0.1 * (i + 1) for i, t in enumerate(TaskName)}
        study = make_study(outputs=outputs)
        assert study.score("m1", "Cardiomegaly") == pytest.approx(0.2)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"age": -1},
            {"sex": 2},
            {"has_lateral_view": False, "num_ap_views": 0, "num_pa_views": 0},
            {"num_ap_views": -1},
        ],
    )
    def test_invalid_fields_rejected(self, kwargs) -> None:
        with pytest.raises(SchemaError):
            make_study(**kwargs)

    def test_score_outside_unit_interval_rejected(self) -> None:
        outputs = {("m1", t): 0.5 for t in TaskName}
        outputs[("m1", TaskName.EDEMA)] = 1.5
        with pytest.raises(SchemaError, match="outside"):
            make_study(outputs=outputs)

    def test_incomplete_labels_rejected(self) -> None:
        labels = make_labels()
        del labels[FindingName.FRACTURE]
        with pytest.raises(SchemaError, match="Fracture"):
            StudyRecord(
                study_id="x", age=50, sex=1, has_lateral_view=True,
                num_ap_views=1, num_pa_views=0, labels=labels,
            )


# ------------------------------------------------------------------ #
# Dataset
# ------------------------------------------------------------------ #

class TestDataset:

    @pytest.fixture
    def dataset(self) -> Dataset:
        studies = [
            make_study("a", age=40, positive=["Edema", "Lung Opacity"]),
            make_study("b", age=50, positive=["No Finding"]),
            make_study("c", age=60, positive=["Cardiomegaly"]),
        ]
        return Dataset(studies=tuple(studies), model_ids=("m1",), hierarchy=LabelHierarchy.default())

    def test_shape_and_ids(self, dataset: Dataset) -> None:
        assert dataset.shape == (3, 1)
        assert len(dataset) == 3
        assert dataset.study_ids == ("a", "b", "c")

    def test_vector_views(self, dataset: Dataset) -> None:
        assert list(dataset.labels(TaskName.EDEMA)) == [1, 0, 0]
        assert list(dataset.labels("No Finding")) == [0, 1, 0]
        assert dataset.scores("m1", TaskName.EDEMA).shape == (3,)
        assert dataset.clinical_matrix().shape == (3, 5)

    def test_views_are_read_only(self, dataset: Dataset) -> None:
        with pytest.raises(ValueError):
            dataset.labels(TaskName.EDEMA)[0] = 0

    def test_duplicate_study_id_rejected(self) -> None:
        with pytest.raises(SchemaError, match="duplicate"):
            Dataset(
                studies=(make_study("a"), make_study("a")),
                model_ids=("m1",),
                hierarchy=LabelHierarchy.default(),
            )

    def test_missing_model_outputs_rejected(self) -> None:
        with pytest.raises(SchemaError, match="output keys"):
            Dataset(
                studies=(make_study("a", model_ids=("m1",)),),
                model_ids=("m1", "m2"),
                hierarchy=LabelHierarchy.default(),
            )

    def test_subset_keeps_order_and_models(self, dataset: Dataset) -> None:
        sub = dataset.subset([2, 0])
        assert sub.study_ids == ("c", "a")
        assert sub.model_ids == dataset.model_ids
        assert list(sub.clinical_matrix()[:, 0]) == [60.0, 40.0]


class TestCohortSummary:

    def test_summary_values(self) -> None:
        studies = (
            make_study("a", age=40, sex=1, has_lateral_view=True, positive=["Edema"]),
            make_study("b", age=60, sex=0, has_lateral_view=False, positive=["No Finding"]),
        )
        summary = cohort_summary(
            Dataset(studies=studies, model_ids=("m1",), hierarchy=LabelHierarchy.default())
        )
        assert summary.n_studies == 2
        assert summary.age_mean == pytest.approx(50.0)
        assert summary.age_sd == pytest.approx(np.std([40, 60], ddof=1))
        assert summary.male_fraction == pytest.approx(0.5)
        assert summary.prevalence["Edema"] == pytest.approx(0.5)
