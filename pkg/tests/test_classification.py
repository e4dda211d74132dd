# -*- coding: utf-8 -*-
"""Tests for src.metrics.classification."""

from __future__ import annotations

import numpy as np
import pytest

from src.app.errors import LengthMismatchError
from src.app.models import TaskName
from src.metrics.classification import (
    binarize,
    confusion_counts,
    f1,
    f1_from_counts,
    f1_value,
    ground_truth_for,
    misclass_ground_truth,
)
from tests.conftest import build_dataset


class TestBinarize:

    def test_per_task_thresholds(self) -> None:
        outputs = (0.532, 0.123, 0.394)
        thresholds = (0.7, 0.5, 0.2)
        truth = np.array([0, 1, 1])
        predictions = np.array([int(binarize(o, t)) for o, t in zip(outputs, thresholds)])
        assert list(predictions) == [0, 0, 1]
        assert list(misclass_ground_truth(predictions, truth)) == [0, 1, 0]

    def test_threshold_is_strict(self) -> None:
        assert list(binarize([0.4, 0.5, 0.6], 0.5)) == [0, 0, 1]

    def test_mismatch_raises(self) -> None:
        with pytest.raises(LengthMismatchError):
            misclass_ground_truth([0, 1], [0, 1, 1])


class TestF1:

    def test_ordinary_case(self) -> None:
        score = f1_from_counts(tp=3, fp=1, fn=2)
        assert score.precision == pytest.approx(0.75)
        assert score.recall == pytest.approx(0.6)
        assert score.f1 == pytest.approx(6 / 9)

    def test_nothing_to_find_nothing_found(self) -> None:
        assert f1_from_counts(0, 0, 0).f1 == 1.0

    def test_no_true_positives(self) -> None:
        score = f1_from_counts(0, 2, 3)
        assert score.f1 == 0.0
        assert score.precision == 0.0 and score.recall == 0.0

    def test_no_predicted_positives(self) -> None:
        score = f1_from_counts(0, 0, 4)
        assert score.precision == 0.0
        assert score.f1 == 0.0

    def test_no_actual_positives_with_false_alarm(self) -> None:
        score = f1_from_counts(0, 1, 0)
        assert score.recall == 0.0
        assert score.f1 == 0.0

    def test_vector_and_fast_paths_agree(self) -> None:
        rng = np.random.default_rng(5)
        for _ in range(50):
            p = rng.integers(0, 2, 30)
            y = rng.integers(0, 2, 30)
            assert f1(p, y).f1 == pytest.approx(f1_value(p, y))

    def test_confusion_counts(self) -> None:
        counts = confusion_counts([1, 1, 0, 0, 1], [1, 0, 1, 0, 1])
        assert (counts.tp, counts.fp, counts.fn, counts.tn) == (2, 1, 1, 1)


class TestGroundTruthFor:

    def test_youden_on_fit_indices_applied_to_all(self) -> None:
        labels = np.array([0, 0, 1, 1, 0, 1])
        scores = np.array([0.1, 0.3, 0.6, 0.8, 0.7, 0.2])
        dataset = build_dataset({TaskName.EDEMA: labels}, {TaskName.EDEMA: scores})
        matrix = ground_truth_for(dataset, "m1", TaskName.EDEMA, fit_indices=[0, 1, 2, 3])
        assert matrix.threshold.threshold == pytest.approx(0.45)
        assert list(matrix.predictions) == [0, 0, 1, 1, 1, 0]
        assert list(matrix.misclassified) == [0, 0, 0, 0, 1, 1]
        assert matrix.misclassification_rate == pytest.approx(2 / 6)

    def test_all_studies_by_default(self) -> None:
        labels = np.array([0, 1, 0, 1])
        scores = np.array([0.2, 0.9, 0.3, 0.8])
        dataset = build_dataset({TaskName.EDEMA: labels}, {TaskName.EDEMA: scores})
        matrix = ground_truth_for(dataset, "m1", "Edema")
        assert matrix.misclassified.sum() == 0
