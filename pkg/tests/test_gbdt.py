# -*- coding: utf-8 -*-
"""Tests for src.identifiers.gbdt and src.identifiers.backends."""

from __future__ import annotations

import numpy as np
import pytest

from src.app.errors import LengthMismatchError
from src.identifiers.backends import BackendKind, ClassifierBackendSpec, LogisticClassifier, fit_backend
from src.identifiers.gbdt import GBDTParams, GradientBoostedTrees, fit_gbdt
from src.metrics.roc import auroc


# ------------------------------------------------------------------ #
# Gradient-boosted trees
# ------------------------------------------------------------------ #

class TestFitGbdt:

    def test_learns_step_function(self) -> None:
        x = np.random.default_rng(0).random(500)
        y = (x > 0.3).astype(int)
        model = fit_gbdt(x[:, None], y)
        accuracy = np.mean((model.predict_proba(x[:, None]) > 0.5) == y)
        assert accuracy >= 0.99

    def test_constant_target_predicts_base_rate(self) -> None:
        X = np.random.default_rng(1).normal(size=(100, 3))
        model = fit_gbdt(X, np.ones(100))
        assert model.predict_proba(X) == pytest.approx(np.ones(100), abs=1e-4)

    def test_zero_rounds_is_base_rate(self) -> None:
        X = np.random.default_rng(2).normal(size=(10, 2))
        y = np.array([1, 1, 1, 0, 0, 0, 0, 0, 0, 0])
        model = fit_gbdt(X, y, GBDTParams(n_rounds=0))
        assert model.trees == []
        assert model.predict_proba(X) == pytest.approx(np.full(10, 0.3))

    def test_learns_xor_of_binary_features(self) -> None:
        X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]] * 25, dtype=float)
        y = (X[:, 0] != X[:, 1]).astype(int)
        model = fit_gbdt(X, y, GBDTParams(max_depth=2))
        assert auroc(model.predict_proba(X), y) >= 0.95

    def test_tree_size_bounded_by_depth(self) -> None:
        X = np.random.default_rng(4).normal(size=(300, 4))
        y = (X.sum(axis=1) > 0).astype(int)
        model = fit_gbdt(X, y, GBDTParams(n_rounds=5, max_depth=2))
        assert len(model.trees) == 5
        assert all(tree.n_leaves <= 4 for tree in model.trees)

    def test_min_leaf_blocks_small_splits(self) -> None:
        X = np.arange(8, dtype=float)[:, None]
        y = np.array([0, 0, 0, 0, 1, 1, 1, 1])
        model = fit_gbdt(X, y, GBDTParams(n_rounds=3, min_leaf=5))
        assert all(tree.n_leaves == 1 for tree in model.trees)

    def test_subsampling_is_seeded(self) -> None:
        rng = np.random.default_rng(5)
        X = rng.normal(size=(200, 3))
        y = (rng.random(200) < 0.4).astype(int)
        params = GBDTParams(n_rounds=20, subsample=0.5)
        first = fit_gbdt(X, y, params, seed=11).predict_proba(X)
        again = fit_gbdt(X, y, params, seed=11).predict_proba(X)
        other = fit_gbdt(X, y, params, seed=12).predict_proba(X)
        assert np.array_equal(first, again)
        assert not np.array_equal(first, other)

    def test_feature_count_checked_at_predict(self) -> None:
        model = fit_gbdt(np.random.default_rng(6).normal(size=(50, 2)), np.arange(50) % 2)
        assert isinstance(model, GradientBoostedTrees)
        with pytest.raises(LengthMismatchError):
            model.predict_proba(np.zeros((3, 3)))

    def test_bad_inputs(self) -> None:
        with pytest.raises(ValueError):
            fit_gbdt(np.zeros((0, 2)), np.zeros(0))
        with pytest.raises(LengthMismatchError):
            fit_gbdt(np.zeros((4, 2)), np.zeros(3))


# ------------------------------------------------------------------ #
# Backends
# ------------------------------------------------------------------ #

class TestBackends:

    def test_default_backend_is_trees(self) -> None:
        spec = ClassifierBackendSpec()
        assert spec.kind is BackendKind.GRADIENT_BOOSTED_TREES
        model = fit_backend(spec, np.arange(20, dtype=float)[:, None], np.arange(20) >= 10, seed=0)
        assert isinstance(model, GradientBoostedTrees)

    def test_logistic_drops_constant_and_duplicate_columns(self) -> None:
        rng = np.random.default_rng(7)
        a = rng.normal(size=400)
        X = np.column_stack([a, np.full(400, 3.0), a])
        y = (rng.random(400) < 1 / (1 + np.exp(-2 * a))).astype(int)
        model = fit_backend(ClassifierBackendSpec(kind="logistic"), X, y, seed=0)
        assert isinstance(model, LogisticClassifier)
        assert list(model.columns) == [0]
        proba = model.predict_proba(X)
        assert proba.shape == (400,)
        assert auroc(proba, y) > 0.75
