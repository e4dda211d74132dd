# -*- coding: utf-8 -*-
"""Shared fixtures: hand-built cohorts and a small synthetic one."""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Optional, Sequence

import numpy as np
import pytest

from src.app.hierarchy import LabelHierarchy
from src.app.models import Dataset, FindingName, StudyRecord, TaskName
from src.services.synthetic import SynthResult, SynthSpec, generate_dataset


def make_labels(positive: Iterable[str] = ()) -> Dict[FindingName, int]:
    """All fourteen findings, zero except *positive*."""
    labels = {f: 0 for f in FindingName}
    for name in positive:
        labels[FindingName(name)] = 1
    return labels


def make_study(
    study_id: str = "s1",
    age: float = 60.0,
    sex: int = 1,
    has_lateral_view: bool = True,
    num_ap_views: int = 1,
    num_pa_views: int = 0,
    positive: Iterable[str] = (),
    outputs: Optional[Mapping] = None,
    model_ids: Sequence[str] = ("m1",),
) -> StudyRecord:
    """A valid study; outputs default to 0.5 for every (model, task)."""
    if outputs is None:
        outputs = {(m, t): 0.5 for m in model_ids for t in TaskName}
    return StudyRecord(
        study_id=study_id,
        age=age,
        sex=sex,
        has_lateral_view=has_lateral_view,
        num_ap_views=num_ap_views,
        num_pa_views=num_pa_views,
        labels=make_labels(positive),
        outputs=dict(outputs),
    )


def build_dataset(
    labels: Dict[TaskName, np.ndarray],
    scores: Dict[TaskName, np.ndarray],
    ages: Optional[np.ndarray] = None,
    rng_seed: int = 0,
    model_id: str = "m1",
) -> Dataset:
    """Single-model cohort from per-task labels and scores.

    Tasks missing from *labels* / *scores* get random ones; clinical
    features are random but valid.
    """
    n = len(next(iter(labels.values())))
    rng = np.random.default_rng(rng_seed)
    full_labels = {t: labels.get(t, (rng.random(n) < 0.3).astype(int)) for t in TaskName}
    full_scores = {t: scores.get(t, rng.random(n)) for t in TaskName}
    ages = rng.integers(20, 90, n).astype(float) if ages is None else ages
    sex = (rng.random(n) < 0.5).astype(int)
    lateral = rng.random(n) < 0.4
    ap = rng.integers(0, 3, n)
    studies = []
    for i in range(n):
        positive = [t.value for t in TaskName if full_labels[t][i] == 1]
        if not positive:
            positive = [FindingName.NO_FINDING.value]
        studies.append(
            StudyRecord(
                study_id=f"study_{i + 1:04d}",
                age=float(ages[i]),
                sex=int(sex[i]),
                has_lateral_view=bool(lateral[i]),
                num_ap_views=int(ap[i]),
                num_pa_views=int(ap[i] == 0),
                labels=make_labels(positive),
                outputs={(model_id, t): float(full_scores[t][i]) for t in TaskName},
            )
        )
    return Dataset(studies=tuple(studies), model_ids=(model_id,), hierarchy=LabelHierarchy.default())


@pytest.fixture(scope="session")
def hierarchy() -> LabelHierarchy:
    return LabelHierarchy.default()


@pytest.fixture(scope="session")
def small_synth() -> SynthResult:
    """400 studies, 2 models, default planted signal."""
    return generate_dataset(SynthSpec(n_studies=400, n_models=2, seed=7))


@pytest.fixture(scope="session")
def small_dataset(small_synth: SynthResult) -> Dataset:
    return small_synth.dataset
