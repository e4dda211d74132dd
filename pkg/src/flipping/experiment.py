# -*- coding: utf-8 -*-
"""
Per-(model, task) flipping experiment and the sweep over all of them.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.app.errors import BootstrapError, DegenerateLabelsError, DegenerateTargetError
from src.app.models import Dataset, TaskName
from src.config.constants import DEFAULT_BOOTSTRAP_RESAMPLES
from src.config.seeding import derive_rng, derive_seed
from src.flipping.search import FlipFold, FlipOutcome, flip_search
from src.identifiers.backends import ClassifierBackendSpec
from src.identifiers.features import IdentifierKind
from src.identifiers.identifier import naive_identifier, train_identifier
from src.metrics.classification import ground_truth_for

logger = logging.getLogger(__name__)

FLIP_KINDS: Tuple[IdentifierKind, ...] = (IdentifierKind.SAME_LABEL, IdentifierKind.ALL_LABELS)


class FlipSplitSpec(BaseModel):
    """Study-level train / validation / test proportions for flipping."""
    n_repeats: int = Field(default=1, ge=1, description="Number of random three-way splits.")
    train_fraction: float = Field(default=0.6, gt=0, lt=1, description="Share of studies in the train fold.")
    val_fraction: float = Field(default=0.2, gt=0, lt=1, description="Share of studies in the validation fold.")

    @model_validator(mode="after")
    def _leave_a_test_fold(self) -> "FlipSplitSpec":
        if self.train_fraction + self.val_fraction >= 1:
            raise ValueError("train_fraction + val_fraction must be below 1")
        return self


def flip_splits(
    n: int, spec: Optional[FlipSplitSpec] = None, seed: int = 0
) -> List[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """(train, val, test) sorted index arrays, one triple per repeat."""
    spec = spec or FlipSplitSpec()
    n_train = int(round(spec.train_fraction * n))
    n_val = int(round(spec.val_fraction * n))
    out = []
    for repeat in range(spec.n_repeats):
        order = derive_rng(seed, "flipping", "split", repeat).permutation(n)
        out.append(
            (
                np.sort(order[:n_train]),
                np.sort(order[n_train : n_train + n_val]),
                np.sort(order[n_train + n_val :]),
            )
        )
    return out


def run_flip_experiment(
    dataset: Dataset,
    model_id: str,
    task: TaskName | str,
    kind: IdentifierKind | str = IdentifierKind.SAME_LABEL,
    backend: Optional[ClassifierBackendSpec] = None,
    flip_split: Optional[FlipSplitSpec] = None,
    seed: int = 0,
    n_resamples: int = DEFAULT_BOOTSTRAP_RESAMPLES,
    k_grid: Optional[Iterable[int]] = None,
    split: int = 0,
) -> FlipOutcome:
    """Threshold, train and score on the train fold, then search k and flip the test fold."""
    task = TaskName(task)
    kind = IdentifierKind(kind)
    train, val, test = flip_splits(len(dataset), flip_split, seed)[split]
    truth = ground_truth_for(dataset, model_id, task, train)
    if kind is IdentifierKind.NAIVE:
        identifier = naive_identifier(model_id, task, truth.threshold)
    else:
        identifier = train_identifier(
            dataset, train, kind, model_id, task, backend,
            seed=derive_seed(seed, "flipping", "fit", model_id, task.value, split, kind.value),
        )
    likelihood = identifier.predict(dataset)
    labels = dataset.labels(task)
    ids = np.asarray(dataset.study_ids, dtype=object)

    def fold(indices: np.ndarray) -> FlipFold:
        return FlipFold(
            predictions=truth.predictions[indices],
            labels=labels[indices],
            likelihoods=likelihood[indices],
            study_ids=tuple(ids[indices]),
        )

    return flip_search(
        fold(train),
        fold(val),
        fold(test),
        k_grid=k_grid,
        seed=derive_seed(seed, "flipping", "bootstrap", model_id, task.value, split, kind.value),
        n_resamples=n_resamples,
    )


@dataclass(frozen=True)
class FlipRecord:
    task: TaskName
    kind: IdentifierKind
    model_id: str
    split: int
    outcome: FlipOutcome


def flip_sweep(
    dataset: Dataset,
    kinds: Iterable[IdentifierKind | str] = FLIP_KINDS,
    backend: Optional[ClassifierBackendSpec] = None,
    flip_split: Optional[FlipSplitSpec] = None,
    seed: int = 0,
    n_resamples: int = DEFAULT_BOOTSTRAP_RESAMPLES,
    k_grid: Optional[Sequence[int]] = None,
    workers: int = 1,
) -> List[FlipRecord]:
    """Run the flipping experiment for every (task, kind, model, split)."""
    flip_split = flip_split or FlipSplitSpec()
    kinds = [IdentifierKind(k) for k in kinds]
    jobs = [
        (task, kind, model_id, split)
        for task in TaskName
        for kind in kinds
        for model_id in sorted(dataset.model_ids)
        for split in range(flip_split.n_repeats)
    ]

    def run(job) -> Optional[FlipRecord]:
        task, kind, model_id, split = job
        try:
            outcome = run_flip_experiment(
                dataset, model_id, task, kind, backend, flip_split, seed, n_resamples, k_grid, split
            )
        except (DegenerateLabelsError, DegenerateTargetError, BootstrapError) as exc:
            logger.warning("Skipping flip %s %s/%s split %d: %s", kind.value, model_id, task.value, split, exc)
            return None
        return FlipRecord(task, kind, model_id, split, outcome)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]
    records = [r for r in results if r is not None]
    logger.info(
        "Flip search done: %d cells, %d flipped", len(records), sum(r.outcome.decision.flip for r in records)
    )
    return records

