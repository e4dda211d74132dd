# -*- coding: utf-8 -*-
"""
Train-and-evaluate loop for the misclassification identifiers.

For every disease, model and random split:
  1. pick the Youden threshold on the train fold,
  2. binarize both folds and derive misclassification truth,
  3. train each identifier on the train fold,
  4. score the test fold and bootstrap its AUROC.
Folds where either the labels or the misclassification target are single
class are skipped with a warning and left out of every mean.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.app.errors import BootstrapError, DegenerateLabelsError, DegenerateTargetError
from src.app.models import Dataset, TaskName
from src.config.constants import DEFAULT_BOOTSTRAP_RESAMPLES
from src.config.seeding import derive_rng, derive_seed
from src.identifiers.backends import ClassifierBackendSpec
from src.identifiers.features import IdentifierKind
from src.identifiers.identifier import TrainedIdentifier, naive_identifier, train_identifier
from src.metrics.bootstrap import BootstrapCI, bootstrap_ci
from src.metrics.classification import ground_truth_for
from src.metrics.roc import auroc

logger = logging.getLogger(__name__)

ALL_TASKS = "All"


class SplitSpec(BaseModel):
    """Repeated random train/test splits at study level."""
    n_repeats: int = Field(default=5, ge=1, description="Number of random train/test splits.")
    train_fraction: float = Field(default=0.72, gt=0, lt=1, description="Share of studies in the train fold.")


def random_splits(n: int, spec: Optional[SplitSpec] = None, seed: int = 0) -> List[Tuple[np.ndarray, np.ndarray]]:
    """(train, test) sorted index arrays, one pair per repeat."""
    spec = spec or SplitSpec()
    n_train = int(round(spec.train_fraction * n))
    n_train = min(max(n_train, 1), n - 1) if n > 1 else n
    splits = []
    for repeat in range(spec.n_repeats):
        order = derive_rng(seed, "identifiers", "split", repeat).permutation(n)
        splits.append((np.sort(order[:n_train]), np.sort(order[n_train:])))
    return splits


@dataclass(frozen=True)
class IdentifierEvalRow:
    task: TaskName
    kind: IdentifierKind
    model_id: str
    split: int
    auroc: BootstrapCI


@dataclass(frozen=True)
class IdentifierSummaryRow:
    task: str
    kind: IdentifierKind
    n_cells: int
    mean_auroc: float
    mean_ci_lower: float
    mean_ci_upper: float


def _sort_key(row: IdentifierEvalRow) -> tuple:
    return (list(TaskName).index(row.task), list(IdentifierKind).index(row.kind), row.model_id, row.split)


@dataclass(frozen=True)
class IdentifierEvalReport:
    rows: Tuple[IdentifierEvalRow, ...]
    skipped: Tuple[Tuple[str, TaskName, int, str], ...] = ()

    def cells(self, task: TaskName | str, kind: IdentifierKind | str) -> List[IdentifierEvalRow]:
        task, kind = TaskName(task), IdentifierKind(kind)
        return [r for r in self.rows if r.task is task and r.kind is kind]

    def mean_auroc(self, task: TaskName | str, kind: IdentifierKind | str) -> float:
        """Mean test AUROC across models and splits; NaN if every fold was skipped."""
        values = [r.auroc.point for r in self.cells(task, kind)]
        return float(np.mean(values)) if values else math.nan

    def summary(self) -> List[IdentifierSummaryRow]:
        """Per (task, kind) means plus an ``All`` row per kind averaging the tasks."""
        kinds = [k for k in IdentifierKind if any(r.kind is k for r in self.rows)]
        out: List[IdentifierSummaryRow] = []
        per_task: Dict[IdentifierKind, List[IdentifierSummaryRow]] = {k: [] for k in kinds}
        for task in TaskName:
            for kind in kinds:
                cells = self.cells(task, kind)
                if not cells:
                    continue
                row = IdentifierSummaryRow(
                    task=task.value,
                    kind=kind,
                    n_cells=len(cells),
                    mean_auroc=float(np.mean([c.auroc.point for c in cells])),
                    mean_ci_lower=float(np.mean([c.auroc.lower for c in cells])),
                    mean_ci_upper=float(np.mean([c.auroc.upper for c in cells])),
                )
                out.append(row)
                per_task[kind].append(row)
        for kind in kinds:
            rows = per_task[kind]
            out.append(
                IdentifierSummaryRow(
                    task=ALL_TASKS,
                    kind=kind,
                    n_cells=sum(r.n_cells for r in rows),
                    mean_auroc=float(np.mean([r.mean_auroc for r in rows])),
                    mean_ci_lower=float(np.mean([r.mean_ci_lower for r in rows])),
                    mean_ci_upper=float(np.mean([r.mean_ci_upper for r in rows])),
                )
            )
        return out


def _evaluate_cell(
    dataset: Dataset,
    model_id: str,
    task: TaskName,
    split: int,
    train: np.ndarray,
    test: np.ndarray,
    kinds: Sequence[IdentifierKind],
    backend: ClassifierBackendSpec,
    seed: int,
    n_resamples: int,
) -> Tuple[List[IdentifierEvalRow], List[Tuple[str, TaskName, int, str]]]:
    where = f"{model_id}/{task.value} split {split}"
    try:
        truth = ground_truth_for(dataset, model_id, task, train)
    except DegenerateLabelsError as exc:
        logger.warning("Skipping %s: %s", where, exc)
        return [], [(model_id, task, split, str(exc))]
    target = truth.misclassified[test]
    if target.min() == target.max():
        reason = f"test fold misclassification target is constant ({int(target[0])})"
        logger.warning("Skipping %s: %s", where, reason)
        return [], [(model_id, task, split, reason)]

    rows: List[IdentifierEvalRow] = []
    skipped: List[Tuple[str, TaskName, int, str]] = []
    for kind in kinds:
        identifier: TrainedIdentifier
        try:
            if kind is IdentifierKind.NAIVE:
                identifier = naive_identifier(model_id, task, truth.threshold)
            else:
                identifier = train_identifier(
                    dataset, train, kind, model_id, task, backend,
                    seed=derive_seed(seed, "identifiers", "fit", model_id, task.value, split, kind.value),
                )
        except DegenerateTargetError as exc:
            logger.warning("Skipping %s %s: %s", kind.value, where, exc)
            skipped.append((model_id, task, split, f"{kind.value}: {exc}"))
            continue
        likelihood = identifier.predict(dataset, test)
        try:
            ci = bootstrap_ci(
                lambda idx: auroc(likelihood[idx], target[idx]),
                n=test.size,
                n_resamples=n_resamples,
                seed=derive_seed(seed, "identifiers", "bootstrap", model_id, task.value, split, kind.value),
            )
        except BootstrapError as exc:
            logger.warning("Skipping %s %s: %s", kind.value, where, exc)
            skipped.append((model_id, task, split, f"{kind.value}: {exc}"))
            continue
        rows.append(IdentifierEvalRow(task, kind, model_id, split, ci))
    return rows, skipped


def evaluate_identifiers(
    dataset: Dataset,
    backend: Optional[ClassifierBackendSpec] = None,
    split_spec: Optional[SplitSpec] = None,
    seed: int = 0,
    kinds: Iterable[IdentifierKind | str] = tuple(IdentifierKind),
    tasks: Iterable[TaskName | str] = tuple(TaskName),
    n_resamples: int = DEFAULT_BOOTSTRAP_RESAMPLES,
    workers: int = 1,
) -> IdentifierEvalReport:
    """Evaluate every identifier kind for every (model, task, split)."""
    backend = backend or ClassifierBackendSpec()
    kinds = [IdentifierKind(k) for k in kinds]
    tasks = [TaskName(t) for t in tasks]
    splits = random_splits(len(dataset), split_spec, seed)
    jobs = [
        (model_id, task, split, train, test)
        for task in tasks
        for model_id in sorted(dataset.model_ids)
        for split, (train, test) in enumerate(splits)
    ]

    def run(job):
        model_id, task, split, train, test = job
        return _evaluate_cell(dataset, model_id, task, split, train, test, kinds, backend, seed, n_resamples)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]

    rows = sorted((row for found, _ in results for row in found), key=_sort_key)
    skipped = tuple(item for _, missed in results for item in missed)
    logger.info(
        "Evaluated %d identifier cells (%d skipped) over %d splits",
        len(rows), len(skipped), len(splits),
    )
    return IdentifierEvalReport(rows=tuple(rows), skipped=skipped)
