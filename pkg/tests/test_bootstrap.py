# -*- coding: utf-8 -*-
"""Tests for src.metrics.bootstrap."""

from __future__ import annotations

import numpy as np
import pytest

from src.app.errors import BootstrapError
from src.metrics.bootstrap import BootstrapCI, UndefinedStatistic, bootstrap_ci
from src.metrics.roc import auroc


@pytest.fixture
def sample() -> np.ndarray:
    return np.random.default_rng(3).normal(size=200)


class TestBootstrapCI:

    def test_point_is_full_sample_statistic(self, sample: np.ndarray) -> None:
        ci = bootstrap_ci(lambda idx: sample[idx].mean(), sample.size, n_resamples=200, seed=1)
        assert ci.point == pytest.approx(sample.mean())
        assert ci.lower < ci.point < ci.upper
        assert ci.n_resamples == 200 and ci.seed == 1

    def test_interval_covers_standard_error_scale(self, sample: np.ndarray) -> None:
        ci = bootstrap_ci(lambda idx: sample[idx].mean(), sample.size, n_resamples=500, seed=2)
        width = ci.upper - ci.lower
        expected = 2 * 1.96 * sample.std(ddof=1) / np.sqrt(sample.size)
        assert width == pytest.approx(expected, rel=0.25)

    def test_same_seed_same_interval(self, sample: np.ndarray) -> None:
        stat = lambda idx: float(np.median(sample[idx]))  # noqa: E731
        assert bootstrap_ci(stat, sample.size, 100, seed=9) == bootstrap_ci(stat, sample.size, 100, seed=9)

    def test_workers_do_not_change_result(self, sample: np.ndarray) -> None:
        stat = lambda idx: float(sample[idx].mean())  # noqa: E731
        sequential = bootstrap_ci(stat, sample.size, 150, seed=4, workers=1)
        threaded = bootstrap_ci(stat, sample.size, 150, seed=4, workers=4)
        assert sequential == threaded

    def test_zero_resamples_is_constant(self, sample: np.ndarray) -> None:
        ci = bootstrap_ci(lambda idx: 1.5, sample.size, n_resamples=0)
        assert ci == BootstrapCI.constant(1.5, 0, 0)


class TestUndefinedResamples:

    def test_degenerate_labels_are_redrawn(self) -> None:
        # 2 positives in 40: many resamples miss both and must be redrawn
        labels = np.zeros(40, dtype=int)
        labels[[3, 17]] = 1
        scores = np.linspace(0, 1, 40)
        ci = bootstrap_ci(lambda idx: auroc(scores[idx], labels[idx]), 40, n_resamples=50, seed=0)
        assert 0.0 <= ci.lower <= ci.upper <= 1.0

    def test_redraw_cap_exhausted(self) -> None:
        calls = {"n": 0}

        def stat(idx: np.ndarray) -> float:
            calls["n"] += 1
            if calls["n"] == 1:
                return 0.0
            raise UndefinedStatistic

        with pytest.raises(BootstrapError, match="redraws"):
            bootstrap_ci(stat, 10, n_resamples=5, seed=0)

    def test_undefined_on_full_sample(self) -> None:
        with pytest.raises(BootstrapError, match="full sample"):
            bootstrap_ci(lambda idx: float("nan"), 10, n_resamples=5)

    def test_empty_sample_rejected(self) -> None:
        with pytest.raises(ValueError):
            bootstrap_ci(lambda idx: 0.0, 0)
