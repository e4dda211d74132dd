# -*- coding: utf-8 -*-
"""
Misclassification audits: which clinical features and radiological
findings predict that a model gets a study wrong.

One logistic model per (model, task, feature family).  Misclassification
ground truth comes from a Youden threshold picked on a random calibration
subset of studies (72 %) and applied to every study.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.app.models import Dataset, TaskName
from src.audit.design import FeatureKind, design_matrix, design_spec
from src.audit.glm import FitReport, GLMSettings, fit_logistic
from src.config.constants import CALIBRATION_FRACTION, SIGNIFICANCE_LEVEL
from src.config.seeding import derive_rng
from src.metrics.classification import MisclassMatrix, ground_truth_for

logger = logging.getLogger(__name__)


def calibration_indices(n: int, seed: int, fraction: float = CALIBRATION_FRACTION) -> np.ndarray:
    """Sorted random subset of ``round(fraction * n)`` study indices."""
    size = max(1, int(round(fraction * n)))
    rng = derive_rng(seed, "audit", "calibration")
    return np.sort(rng.choice(n, size=min(size, n), replace=False))


def _ground_truth(
    dataset: Dataset, model_id: str, task: TaskName, misclass: Optional[MisclassMatrix], seed: int
) -> MisclassMatrix:
    if misclass is not None:
        return misclass
    return ground_truth_for(dataset, model_id, task, calibration_indices(len(dataset), seed))


def _audit(
    kind: FeatureKind,
    dataset: Dataset,
    model_id: str,
    task: TaskName | str,
    misclass: Optional[MisclassMatrix],
    settings: Optional[GLMSettings],
    seed: int,
) -> FitReport:
    task = TaskName(task)
    truth = _ground_truth(dataset, model_id, task, misclass, seed)
    spec = design_spec(kind, task, dataset.hierarchy)
    report = fit_logistic(
        design_matrix(dataset, spec), truth.misclassified, settings, spec.feature_names
    )
    logger.debug(
        "%s audit %s/%s: %d features, converged=%s", kind.value, model_id, task.value,
        len(spec.feature_names), report.converged,
    )
    return report


def audit_clinical(
    dataset: Dataset,
    model_id: str,
    task: TaskName | str,
    misclass: Optional[MisclassMatrix] = None,
    settings: Optional[GLMSettings] = None,
    seed: int = 0,
) -> FitReport:
    """Five clinical features against misclassification."""
    return _audit(FeatureKind.CLINICAL, dataset, model_id, task, misclass, settings, seed)


def audit_findings(
    dataset: Dataset,
    model_id: str,
    task: TaskName | str,
    misclass: Optional[MisclassMatrix] = None,
    settings: Optional[GLMSettings] = None,
    seed: int = 0,
) -> FitReport:
    """Finding indicators outside the task's hierarchy closure."""
    return _audit(FeatureKind.FINDINGS, dataset, model_id, task, misclass, settings, seed)


def audit_age_comorbidity(
    dataset: Dataset,
    model_id: str,
    task: TaskName | str,
    misclass: Optional[MisclassMatrix] = None,
    settings: Optional[GLMSettings] = None,
    seed: int = 0,
) -> FitReport:
    """Joint model of age and comorbidity count."""
    return _audit(FeatureKind.AGE_PLUS_COMORBIDITY, dataset, model_id, task, misclass, settings, seed)


_AUDITS = {
    FeatureKind.CLINICAL: audit_clinical,
    FeatureKind.FINDINGS: audit_findings,
    FeatureKind.AGE_PLUS_COMORBIDITY: audit_age_comorbidity,
}


# ---------------------------------------------------------------------------
# Cross-model aggregation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AggregateRow:
    feature: str
    n_models: int
    n_significant_models: int
    mean_odds_ratio: float
    agg_ci_lower: float
    agg_ci_upper: float


@dataclass(frozen=True)
class AggregateReport:
    task: TaskName
    rows: Tuple[AggregateRow, ...]

    def row(self, feature: str) -> AggregateRow:
        for row in self.rows:
            if row.feature == feature:
                return row
        raise KeyError(feature)


def _aggregate_interval(lowers: np.ndarray, uppers: np.ndarray) -> Tuple[float, float]:
    """Cross-model interval: arithmetic means of the per-model Wald bounds."""
    return float(np.mean(lowers)), float(np.mean(uppers))


def aggregate_across_models(reports: Sequence[FitReport], task: TaskName | str) -> AggregateReport:
    """Count significant models and average odds ratios per feature."""
    if not reports:
        raise ValueError("aggregate_across_models needs at least one report")
    names = reports[0].feature_names
    for report in reports[1:]:
        if report.feature_names != names:
            raise ValueError("reports do not share a feature set")
    rows = []
    for j, name in enumerate(names):
        stats = [r.features[j] for r in reports]
        lower, upper = _aggregate_interval(
            np.array([s.or_ci_lower for s in stats]), np.array([s.or_ci_upper for s in stats])
        )
        rows.append(
            AggregateRow(
                feature=name,
                n_models=len(stats),
                n_significant_models=sum(1 for s in stats if s.p_value < SIGNIFICANCE_LEVEL),
                mean_odds_ratio=float(np.mean([s.odds_ratio for s in stats])),
                agg_ci_lower=lower,
                agg_ci_upper=upper,
            )
        )
    return AggregateReport(task=TaskName(task), rows=tuple(rows))


# ---------------------------------------------------------------------------
# Sweep over every (model, task)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditRecord:
    model_id: str
    task: TaskName
    kind: FeatureKind
    report: FitReport


def audit_sweep(
    dataset: Dataset,
    kinds: Iterable[FeatureKind] = tuple(FeatureKind),
    seed: int = 0,
    settings: Optional[GLMSettings] = None,
    workers: int = 1,
) -> List[AuditRecord]:
    """Run every requested audit for every (model, task), in canonical order."""
    calibration = calibration_indices(len(dataset), seed)
    kinds = [FeatureKind(k) for k in kinds]
    cells = [(m, t) for m in sorted(dataset.model_ids) for t in TaskName]

    def run(cell: Tuple[str, TaskName]) -> List[AuditRecord]:
        model_id, task = cell
        truth = ground_truth_for(dataset, model_id, task, calibration)
        return [
            AuditRecord(model_id, task, kind, _AUDITS[kind](dataset, model_id, task, truth, settings, seed))
            for kind in kinds
        ]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(run, cells))
    else:
        batches = [run(cell) for cell in cells]
    records = [record for batch in batches for record in batch]
    logger.info("Audited %d (model, task) cells, %d fits", len(cells), len(records))
    return records
