# -*- coding: utf-8 -*-
"""Tests for the misclassification identifiers: features, training, evaluation."""

from __future__ import annotations

from unittest.mock import patch

import numpy as np
import pytest
from scipy.stats import rankdata

from src.app.errors import BootstrapError, DegenerateTargetError, SchemaError
from src.app.models import Dataset, TaskName
from src.identifiers.backends import ClassifierBackendSpec
from src.identifiers.evaluation import (
    ALL_TASKS,
    SplitSpec,
    evaluate_identifiers,
    random_splits,
)
from src.identifiers.features import IdentifierKind, build_features, feature_matrix, feature_names
from src.identifiers.gbdt import GBDTParams
from src.identifiers.identifier import naive_score, train_identifier
from src.metrics.classification import ground_truth_for
from src.metrics.bootstrap import bootstrap_ci
from src.metrics.roc import auroc
from src.services.synthetic import SynthSpec, generate_dataset
from tests.conftest import build_dataset

FAST_TREES = ClassifierBackendSpec(trees=GBDTParams(n_rounds=30))
ONE_SPLIT = SplitSpec(n_repeats=1)


def _band_dataset(n: int = 1000, seed: int = 0) -> Dataset:
    """Edema labels follow score > 0.5 except inside [0.4, 0.6], where they flip."""
    rng = np.random.default_rng(seed)
    scores = rng.random(n)
    labels = (scores > 0.5).astype(int)
    band = (scores >= 0.4) & (scores <= 0.6)
    labels[band] = 1 - labels[band]
    return build_dataset({TaskName.EDEMA: labels}, {TaskName.EDEMA: scores}, rng_seed=seed)


def _calibrated_dataset(n: int = 1000, seed: int = 0) -> Dataset:
    """Edema labels drawn with P(y = 1) = score: errors concentrate near 0.5."""
    rng = np.random.default_rng(seed)
    scores = rng.random(n)
    labels = (rng.random(n) < scores).astype(int)
    return build_dataset({TaskName.EDEMA: labels}, {TaskName.EDEMA: scores}, rng_seed=seed + 1)


# ------------------------------------------------------------------ #
# Naive baseline
# ------------------------------------------------------------------ #

class TestNaiveScore:

    def test_on_threshold_is_maximal(self) -> None:
        assert naive_score(0.7, 0.7) == 0.0

    def test_distance(self) -> None:
        assert naive_score(0.1, 0.7) == pytest.approx(-0.6)

    def test_ranking(self) -> None:
        likelihood = naive_score(np.array([0.69, 0.99, 0.71]), 0.7)
        order = list(np.argsort(-likelihood, kind="stable"))
        assert order[-1] == 1
        assert set(order[:2]) == {0, 2}

    def test_monotone_transform_keeps_ranking(self) -> None:
        scores = np.random.default_rng(0).random(50)
        likelihood = naive_score(scores, 0.4)
        assert np.array_equal(rankdata(likelihood), rankdata(np.exp(3 * likelihood)))


# ------------------------------------------------------------------ #
# Feature layouts
# ------------------------------------------------------------------ #

class TestFeatures:

    @pytest.mark.parametrize(
        "kind, length",
        [("naive", 1), ("clinical_only", 5), ("same_label", 6), ("all_labels", 10)],
    )
    def test_lengths(self, kind: str, length: int) -> None:
        assert len(feature_names(kind, TaskName.CARDIOMEGALY)) == length

    def test_same_label_is_prefix_of_all_labels(self) -> None:
        for task in TaskName:
            same = feature_names(IdentifierKind.SAME_LABEL, task)
            full = feature_names(IdentifierKind.ALL_LABELS, task)
            assert full[: len(same)] == same
            assert same[-1] == f"score:{task.value}"

    def test_other_scores_in_task_order(self) -> None:
        names = feature_names(IdentifierKind.ALL_LABELS, TaskName.EDEMA)
        assert names[6:] == (
            "score:Atelectasis", "score:Cardiomegaly", "score:Pleural Effusion", "score:Consolidation",
        )

    def test_matrix_rows_equal_study_vectors(self, small_dataset: Dataset) -> None:
        X = feature_matrix(small_dataset, "all_labels", "model_02", TaskName.ATELECTASIS, indices=[3, 7])
        for row, i in zip(X, [3, 7]):
            expected = build_features(small_dataset.studies[i], "all_labels", "model_02", TaskName.ATELECTASIS)
            assert np.array_equal(row, expected)

    def test_unknown_model(self, small_dataset: Dataset) -> None:
        with pytest.raises(SchemaError):
            feature_matrix(small_dataset, "same_label", "nobody", TaskName.EDEMA)

    def test_missing_score_in_study(self, small_dataset: Dataset) -> None:
        with pytest.raises(SchemaError, match="no score"):
            build_features(small_dataset.studies[0], "same_label", "nobody", TaskName.EDEMA)


# ------------------------------------------------------------------ #
# Training
# ------------------------------------------------------------------ #

class TestTrainIdentifier:

    def test_naive_cannot_be_trained(self, small_dataset: Dataset) -> None:
        with pytest.raises(ValueError):
            train_identifier(small_dataset, np.arange(100), "naive", "model_01", TaskName.EDEMA)

    def test_perfect_model_is_degenerate(self) -> None:
        rng = np.random.default_rng(1)
        labels = (rng.random(200) < 0.4).astype(int)
        scores = np.where(labels == 1, 0.6 + 0.4 * rng.random(200), 0.4 * rng.random(200))
        dataset = build_dataset({TaskName.EDEMA: labels}, {TaskName.EDEMA: scores})
        with pytest.raises(DegenerateTargetError):
            train_identifier(dataset, np.arange(150), "same_label", "m1", TaskName.EDEMA)

    def test_seeded_training_is_reproducible(self, small_dataset: Dataset) -> None:
        train = np.arange(300)
        backend = ClassifierBackendSpec(trees=GBDTParams(n_rounds=20, subsample=0.7))
        a = train_identifier(small_dataset, train, "all_labels", "model_01", TaskName.EDEMA, backend, seed=5)
        b = train_identifier(small_dataset, train, "all_labels", "model_01", TaskName.EDEMA, backend, seed=5)
        test = np.arange(300, 400)
        assert np.array_equal(a.predict(small_dataset, test), b.predict(small_dataset, test))

    def test_predictions_follow_study_order(self, small_dataset: Dataset) -> None:
        identifier = train_identifier(
            small_dataset, np.arange(300), "same_label", "model_01", TaskName.EDEMA, FAST_TREES
        )
        test = np.arange(300, 400)
        shuffled = np.random.default_rng(2).permutation(test)
        forward = dict(zip(test, identifier.predict(small_dataset, test)))
        permuted = dict(zip(shuffled, identifier.predict(small_dataset, shuffled)))
        assert forward == permuted

    def test_threshold_comes_from_train_fold(self) -> None:
        dataset = _band_dataset()
        identifier = train_identifier(dataset, np.arange(500), "same_label", "m1", TaskName.EDEMA, FAST_TREES)
        cut = identifier.threshold_used.threshold
        assert min(abs(cut - 0.4), abs(cut - 0.6)) < 0.02


# ------------------------------------------------------------------ #
# Evaluation
# ------------------------------------------------------------------ #

class TestRandomSplits:

    def test_partition(self) -> None:
        (train, test), = random_splits(700, ONE_SPLIT, seed=0)
        assert train.size == 504 and test.size == 196
        assert np.intersect1d(train, test).size == 0
        assert np.array_equal(np.sort(np.concatenate([train, test])), np.arange(700))

    def test_repeats_differ(self) -> None:
        splits = random_splits(100, SplitSpec(n_repeats=3), seed=1)
        assert len(splits) == 3
        assert not np.array_equal(splits[0][0], splits[1][0])


class TestEvaluateIdentifiers:

    def test_single_model_single_task_cardinality(self) -> None:
        report = evaluate_identifiers(
            _calibrated_dataset(400), FAST_TREES, ONE_SPLIT, seed=0,
            tasks=[TaskName.EDEMA], n_resamples=20,
        )
        assert len(report.rows) == len(IdentifierKind)
        assert {r.kind for r in report.rows} == set(IdentifierKind)
        assert all(0.0 <= r.auroc.point <= 1.0 for r in report.rows)
        summary = report.summary()
        assert len(summary) == 2 * len(IdentifierKind)
        assert {r.task for r in summary} == {"Edema", ALL_TASKS}

    def test_planted_band_is_learned(self) -> None:
        report = evaluate_identifiers(
            _band_dataset(), FAST_TREES, ONE_SPLIT, seed=0,
            kinds=["naive", "same_label"], tasks=[TaskName.EDEMA], n_resamples=20,
        )
        assert report.mean_auroc(TaskName.EDEMA, "same_label") > 0.9

    def test_naive_beats_clinical_when_errors_sit_near_threshold(self) -> None:
        report = evaluate_identifiers(
            _calibrated_dataset(), FAST_TREES, ONE_SPLIT, seed=0,
            kinds=["naive", "clinical_only"], tasks=[TaskName.EDEMA], n_resamples=20,
        )
        assert report.mean_auroc(TaskName.EDEMA, "naive") > report.mean_auroc(TaskName.EDEMA, "clinical_only")

    def test_point_estimate_is_full_fold_auroc(self, small_dataset: Dataset) -> None:
        report = evaluate_identifiers(
            small_dataset, FAST_TREES, ONE_SPLIT, seed=3,
            kinds=["naive"], tasks=[TaskName.CARDIOMEGALY], n_resamples=30,
        )
        (train, test), = random_splits(len(small_dataset), ONE_SPLIT, seed=3)
        for row in report.rows:
            truth = ground_truth_for(small_dataset, row.model_id, TaskName.CARDIOMEGALY, train)
            likelihood = naive_score(small_dataset.scores(row.model_id, TaskName.CARDIOMEGALY)[test], truth.threshold.threshold)
            assert row.auroc.point == pytest.approx(auroc(likelihood, truth.misclassified[test]))
        assert np.isnan(report.mean_auroc(TaskName.EDEMA, "naive"))

    def test_degenerate_task_is_skipped(self) -> None:
        rng = np.random.default_rng(4)
        labels = (rng.random(300) < 0.5).astype(int)
        scores = np.where(labels == 1, 0.9, 0.1)
        dataset = build_dataset({TaskName.EDEMA: labels}, {TaskName.EDEMA: scores})
        report = evaluate_identifiers(
            dataset, FAST_TREES, ONE_SPLIT, seed=0, tasks=[TaskName.EDEMA], n_resamples=10,
        )
        assert report.rows == ()
        assert len(report.skipped) == 1
        assert np.isnan(report.mean_auroc(TaskName.EDEMA, "naive"))

    def test_exhausted_bootstrap_skips_only_that_cell(self) -> None:
        calls = []

        def first_call_fails(*args, **kwargs):
            calls.append(1)
            if len(calls) == 1:
                raise BootstrapError("statistic undefined on resample 880 after 10 redraws")
            return bootstrap_ci(*args, **kwargs)

        with patch("src.identifiers.evaluation.bootstrap_ci", side_effect=first_call_fails):
            report = evaluate_identifiers(
                _calibrated_dataset(400), FAST_TREES, ONE_SPLIT, seed=0,
                kinds=["naive", "same_label"], tasks=[TaskName.EDEMA], n_resamples=10,
            )
        assert [r.kind for r in report.rows] == [IdentifierKind.SAME_LABEL]
        (model_id, task, split, reason), = report.skipped
        assert (model_id, task, split) == ("m1", TaskName.EDEMA, 0)
        assert reason.startswith("naive:") and "redraws" in reason
        assert not np.isnan(report.mean_auroc(TaskName.EDEMA, "same_label"))
        assert np.isnan(report.mean_auroc(TaskName.EDEMA, "naive"))

    def test_workers_do_not_change_report(self, small_dataset: Dataset) -> None:
        kwargs = dict(kinds=["naive", "same_label"], tasks=[TaskName.EDEMA], n_resamples=10)
        sequential = evaluate_identifiers(small_dataset, FAST_TREES, ONE_SPLIT, seed=1, **kwargs)
        threaded = evaluate_identifiers(small_dataset, FAST_TREES, ONE_SPLIT, seed=1, workers=3, **kwargs)
        assert sequential == threaded


@pytest.mark.slow
class TestIdentifierAcceptance:

    def test_null_target_gives_chance_auroc(self) -> None:
        values = []
        for seed in range(20):
            rng = np.random.default_rng(100 + seed)
            labels = (rng.random(1000) < 0.5).astype(int)
            scores = rng.random(1000)
            dataset = build_dataset({TaskName.EDEMA: labels}, {TaskName.EDEMA: scores}, rng_seed=seed)
            report = evaluate_identifiers(
                dataset, FAST_TREES, ONE_SPLIT, seed=seed,
                kinds=["clinical_only"], tasks=[TaskName.EDEMA], n_resamples=10,
            )
            values.append(report.mean_auroc(TaskName.EDEMA, "clinical_only"))
        values = np.asarray(values)
        assert 0.45 <= values.mean() <= 0.55
        assert np.sum((values >= 0.4) & (values <= 0.6)) >= 18

    def test_identifier_ordering_on_planted_generator(self) -> None:
        means = {kind: [] for kind in IdentifierKind}
        for seed in range(5):
            dataset = generate_dataset(SynthSpec(n_models=3, seed=seed)).dataset
            report = evaluate_identifiers(
                dataset,
                ClassifierBackendSpec(trees=GBDTParams(n_rounds=50)),
                SplitSpec(n_repeats=2),
                seed=seed,
                n_resamples=20,
            )
            for kind in IdentifierKind:
                means[kind].append(next(r.mean_auroc for r in report.summary() if r.task == ALL_TASKS and r.kind is kind))
        avg = {kind: float(np.mean(v)) for kind, v in means.items()}
        assert avg[IdentifierKind.SAME_LABEL] >= avg[IdentifierKind.NAIVE]
        assert avg[IdentifierKind.NAIVE] > avg[IdentifierKind.CLINICAL_ONLY] >= 0.5
        assert abs(avg[IdentifierKind.SAME_LABEL] - avg[IdentifierKind.ALL_LABELS]) <= 0.05
