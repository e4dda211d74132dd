# -*- coding: utf-8 -*-
"""
Report tables and the markdown digest.

Every table is rendered to text before anything touches the output
directory; the runner hands the texts to
:func:`src.app.dataset_io.write_atomically`, so a failing command leaves no
partial reports.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd

from src.app.errors import MissingPrerequisiteError
from src.app.models import CohortSummary, TaskName
from src.audit.auditor import AuditRecord, aggregate_across_models
from src.audit.design import FeatureKind
from src.config.constants import (
    AUDIT_AGGREGATE_CSV,
    FLIP_REPORT_CSV,
    IDENTIFIER_SUMMARY_CSV,
    WIDE_INTERVAL_LOWER,
    WIDE_INTERVAL_UPPER,
)
from src.flipping.experiment import FlipRecord
from src.identifiers.evaluation import ALL_TASKS, IdentifierEvalReport
from src.identifiers.features import IdentifierKind

logger = logging.getLogger(__name__)

AUDIT_COLUMNS = [
    "model_id", "task", "kind", "feature", "coefficient", "std_error", "z_value", "p_value",
    "odds_ratio", "or_ci_lower", "or_ci_upper", "significant", "converged", "diagnostic",
    "n_observations", "pseudo_r2", "aic",
]
AGGREGATE_COLUMNS = [
    "task", "kind", "feature", "n_models", "n_significant_models",
    "mean_odds_ratio", "agg_ci_lower", "agg_ci_upper",
]
IDENTIFIER_COLUMNS = ["task", "kind", "model_id", "split", "auroc", "ci_lower", "ci_upper"]
IDENTIFIER_SUMMARY_COLUMNS = ["task", "kind", "n_cells", "mean_auroc", "ci_lower", "ci_upper"]
FLIP_COLUMNS = [
    "task", "identifier_kind", "model_id", "split", "flipped", "k", "flipping_threshold",
    "top_k_precision", "f1_before", "f1_after", "f1_change", "ci_lower", "ci_upper", "n_flipped_test",
]
FLIP_SUMMARY_COLUMNS = [
    "task", "identifier_kind", "n_cells", "n_flipped", "mean_f1_change", "ci_lower", "ci_upper",
]

_TASK_ORDER = [t.value for t in TaskName] + [ALL_TASKS]


# ------------------------------------------------------------------ #
# Frames
# ------------------------------------------------------------------ #

def audit_frame(records: Sequence[AuditRecord]) -> pd.DataFrame:
    rows = []
    for record in records:
        report = record.report
        for stat in report.features:
            rows.append(
                {
                    "model_id": record.model_id,
                    "task": record.task.value,
                    "kind": record.kind.value,
                    "feature": stat.name,
                    "coefficient": stat.coefficient,
                    "std_error": stat.std_error,
                    "z_value": stat.z_value,
                    "p_value": stat.p_value,
                    "odds_ratio": stat.odds_ratio,
                    "or_ci_lower": stat.or_ci_lower,
                    "or_ci_upper": stat.or_ci_upper,
                    "significant": stat.significant,
                    "converged": report.converged,
                    "diagnostic": report.diagnostic or "",
                    "n_observations": report.n_observations,
                    "pseudo_r2": report.pseudo_r2,
                    "aic": report.aic,
                }
            )
    return pd.DataFrame(rows, columns=AUDIT_COLUMNS)


def aggregate_frame(records: Sequence[AuditRecord]) -> pd.DataFrame:
    """One row per (task, kind, feature), aggregated across models."""
    rows = []
    for task in TaskName:
        for kind in FeatureKind:
            reports = [r.report for r in records if r.task is task and r.kind is kind]
            if not reports:
                continue
            aggregate = aggregate_across_models(reports, task)
            for row in aggregate.rows:
                rows.append(
                    {
                        "task": task.value,
                        "kind": kind.value,
                        "feature": row.feature,
                        "n_models": row.n_models,
                        "n_significant_models": row.n_significant_models,
                        "mean_odds_ratio": row.mean_odds_ratio,
                        "agg_ci_lower": row.agg_ci_lower,
                        "agg_ci_upper": row.agg_ci_upper,
                    }
                )
    return pd.DataFrame(rows, columns=AGGREGATE_COLUMNS)


def identifier_frame(report: IdentifierEvalReport) -> pd.DataFrame:
    rows = [
        {
            "task": r.task.value,
            "kind": r.kind.value,
            "model_id": r.model_id,
            "split": r.split,
            "auroc": r.auroc.point,
            "ci_lower": r.auroc.lower,
            "ci_upper": r.auroc.upper,
        }
        for r in report.rows
    ]
    return pd.DataFrame(rows, columns=IDENTIFIER_COLUMNS)


def identifier_summary_frame(report: IdentifierEvalReport) -> pd.DataFrame:
    rows = [
        {
            "task": r.task,
            "kind": r.kind.value,
            "n_cells": r.n_cells,
            "mean_auroc": r.mean_auroc,
            "ci_lower": r.mean_ci_lower,
            "ci_upper": r.mean_ci_upper,
        }
        for r in report.summary()
    ]
    return pd.DataFrame(rows, columns=IDENTIFIER_SUMMARY_COLUMNS)


def flip_frame(records: Sequence[FlipRecord]) -> pd.DataFrame:
    rows = []
    for record in records:
        outcome = record.outcome
        rows.append(
            {
                "task": record.task.value,
                "identifier_kind": record.kind.value,
                "model_id": record.model_id,
                "split": record.split,
                "flipped": outcome.decision.flip,
                "k": outcome.decision.k,
                "flipping_threshold": outcome.decision.flipping_threshold,
                "top_k_precision": outcome.decision.top_k_precision,
                "f1_before": outcome.f1_before,
                "f1_after": outcome.f1_after,
                "f1_change": outcome.f1_change,
                "ci_lower": outcome.f1_change_ci.lower,
                "ci_upper": outcome.f1_change_ci.upper,
                "n_flipped_test": len(outcome.flipped_study_ids),
            }
        )
    return pd.DataFrame(rows, columns=FLIP_COLUMNS)


def _canonical(frame: pd.DataFrame, kind_column: str, kinds: Iterable[str]) -> pd.DataFrame:
    order = {"task": _TASK_ORDER, kind_column: list(kinds)}
    keys = [frame[c].map({v: i for i, v in enumerate(order[c])}) for c in ("task", kind_column)]
    ranked = frame.assign(_t=keys[0], _k=keys[1]).sort_values(["_t", "_k"], kind="stable")
    return ranked.drop(columns=["_t", "_k"]).reset_index(drop=True)


def flip_summary_frame(flips: pd.DataFrame) -> pd.DataFrame:
    """Per (task, identifier kind): cells, flips, mean F1 change and mean CI bounds."""
    if flips.empty:
        return pd.DataFrame(columns=FLIP_SUMMARY_COLUMNS)
    flags = flips["flipped"].astype(str).str.lower().isin(["true", "1"])
    grouped = flips.assign(flipped=flags).groupby(["task", "identifier_kind"], sort=False)
    summary = grouped.agg(
        n_cells=("f1_change", "size"),
        n_flipped=("flipped", "sum"),
        mean_f1_change=("f1_change", "mean"),
        ci_lower=("ci_lower", "mean"),
        ci_upper=("ci_upper", "mean"),
    ).reset_index()
    summary["n_flipped"] = summary["n_flipped"].astype(int)
    return _canonical(summary, "identifier_kind", [k.value for k in IdentifierKind])[FLIP_SUMMARY_COLUMNS]


def is_wide(lower: float, upper: float) -> bool:
    """Intervals too wide to display meaningfully (rendered as ``-``)."""
    return not (math.isfinite(lower) and math.isfinite(upper)) or upper > WIDE_INTERVAL_UPPER or lower < WIDE_INTERVAL_LOWER


def odds_ratio_plot_frame(aggregate: pd.DataFrame) -> pd.DataFrame:
    frame = aggregate[["task", "kind", "feature", "mean_odds_ratio", "agg_ci_lower", "agg_ci_upper"]].copy()
    frame["wide"] = [is_wide(lo, hi) for lo, hi in zip(frame["agg_ci_lower"], frame["agg_ci_upper"])]
    return frame.reset_index(drop=True)


# ------------------------------------------------------------------ #
# Rendering
# ------------------------------------------------------------------ #

def _markdown_table(headers: Sequence[str], rows: Iterable[Sequence[str]]) -> List[str]:
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return lines


def _fmt(value: float, digits: int = 3) -> str:
    return "-" if value is None or not math.isfinite(float(value)) else f"{float(value):.{digits}f}"


def _interval(lower: float, upper: float, digits: int = 3) -> str:
    return f"[{_fmt(lower, digits)}, {_fmt(upper, digits)}]"


def render_summary(
    aggregate: pd.DataFrame,
    identifier_summary: pd.DataFrame,
    flip_summary: pd.DataFrame,
    cohort: Optional[CohortSummary] = None,
) -> str:
    """Markdown digest of the three analyses."""
    lines = ["# flipaudit summary", ""]

    if cohort is not None:
        lines += ["## Cohort", ""]
        lines += _markdown_table(
            ["studies", "models", "age mean (sd)", "male", "lateral view"],
            [[
                str(cohort.n_studies),
                str(cohort.n_models),
                f"{_fmt(cohort.age_mean, 1)} ({_fmt(cohort.age_sd, 1)})",
                _fmt(cohort.male_fraction),
                _fmt(cohort.lateral_fraction),
            ]],
        )
        lines += ["", "Finding prevalence:", ""]
        lines += _markdown_table(
            ["finding", "prevalence"],
            [[name, _fmt(rate)] for name, rate in cohort.prevalence.items()],
        )
        lines.append("")

    lines += ["## Misclassification audit", ""]
    lines += _markdown_table(
        ["task", "kind", "feature", "significant models", "mean OR", "aggregated 95% CI"],
        [
            [
                row.task,
                row.kind,
                row.feature,
                f"{int(row.n_significant_models)}/{int(row.n_models)}",
                _fmt(row.mean_odds_ratio),
                "-" if is_wide(row.agg_ci_lower, row.agg_ci_upper) else _interval(row.agg_ci_lower, row.agg_ci_upper),
            ]
            for row in aggregate.itertuples(index=False)
        ],
    )
    lines += ["", "## Misclassification identifiers (mean test AUROC)", ""]
    lines += _markdown_table(
        ["task", "kind", "cells", "mean AUROC", "mean 95% CI"],
        [
            [row.task, row.kind, str(int(row.n_cells)), _fmt(row.mean_auroc), _interval(row.ci_lower, row.ci_upper)]
            for row in identifier_summary.itertuples(index=False)
        ],
    )
    lines += ["", "## Flipping (test-fold F1 change)", ""]
    lines += _markdown_table(
        ["task", "identifier", "models flipped", "mean F1 change", "mean 95% CI"],
        [
            [
                row.task,
                row.identifier_kind,
                f"{int(row.n_flipped)}/{int(row.n_cells)}",
                _fmt(row.mean_f1_change, 4),
                _interval(row.ci_lower, row.ci_upper, 4),
            ]
            for row in flip_summary.itertuples(index=False)
        ],
    )
    lines.append("")
    return "\n".join(lines)


# ------------------------------------------------------------------ #
# Files
# ------------------------------------------------------------------ #

def read_prerequisite(directory: Path, name: str, command: str) -> pd.DataFrame:
    path = Path(directory) / name
    if not path.is_file():
        raise MissingPrerequisiteError(str(path), command)
    return pd.read_csv(path, keep_default_na=False, na_values=[""])


def read_report_inputs(directory: Path) -> Dict[str, pd.DataFrame]:
    """The three upstream tables ``report`` digests, checked in pipeline order."""
    return {
        "aggregate": read_prerequisite(directory, AUDIT_AGGREGATE_CSV, "audit"),
        "identifier_summary": read_prerequisite(directory, IDENTIFIER_SUMMARY_CSV, "identify"),
        "flips": read_prerequisite(directory, FLIP_REPORT_CSV, "flip"),
    }
