# -*- coding: utf-8 -*-
"""
Pipeline commands: synth, audit, identify, flip, report and run.

Each command takes a resolved :class:`RunConfig`, does its work entirely in
memory and only then writes its files atomically into ``output_dir``.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Optional

from src.app.dataset_io import load_dataset, render_csv, write_atomically
from src.app.models import Dataset, cohort_summary
from src.audit.auditor import audit_sweep
from src.config.constants import (
    AUDIT_AGGREGATE_CSV,
    AUDIT_REPORT_CSV,
    FLIP_REPORT_CSV,
    IDENTIFIER_REPORT_CSV,
    IDENTIFIER_SUMMARY_CSV,
    PLOT_FLIP_F1_CSV,
    PLOT_IDENTIFIER_AUROC_CSV,
    PLOT_ODDS_RATIOS_CSV,
    SUMMARY_MD,
)
from src.config.settings import RunConfig, resolve_workers
from src.flipping.experiment import flip_sweep
from src.identifiers.evaluation import evaluate_identifiers
from src.services import reports
from src.services.synthetic import synth_generate

logger = logging.getLogger(__name__)


def _load(config: RunConfig) -> Dataset:
    inputs = config.inputs
    return load_dataset(inputs.studies, inputs.outputs, inputs.hierarchy)


def _workers(workers: Optional[int]) -> int:
    return resolve_workers() if workers is None else workers


def cmd_synth(config: RunConfig) -> List[Path]:
    """Write the synthetic cohort described by ``config.synth``."""
    paths = synth_generate(config.synth, config.synth_dir)
    return list(paths.values())


def cmd_audit(config: RunConfig, workers: Optional[int] = None) -> List[Path]:
    """Clinical, findings and age + comorbidity audits for every (model, task)."""
    dataset = _load(config)
    logger.info("Auditing %d models x 5 tasks", len(dataset.model_ids))
    records = audit_sweep(dataset, seed=config.seed, settings=config.glm, workers=_workers(workers))
    return write_atomically(
        config.output_dir,
        {
            AUDIT_REPORT_CSV: render_csv(reports.audit_frame(records)),
            AUDIT_AGGREGATE_CSV: render_csv(reports.aggregate_frame(records)),
        },
    )


def cmd_identify(config: RunConfig, workers: Optional[int] = None) -> List[Path]:
    """Evaluate the four misclassification identifiers."""
    dataset = _load(config)
    logger.info(
        "Evaluating identifiers: %d models, %d splits, backend %s",
        len(dataset.model_ids), config.identifier_splits.n_repeats, config.backend.kind.value,
    )
    report = evaluate_identifiers(
        dataset,
        backend=config.backend,
        split_spec=config.identifier_splits,
        seed=config.seed,
        n_resamples=config.bootstrap_resamples,
        workers=_workers(workers),
    )
    return write_atomically(
        config.output_dir,
        {
            IDENTIFIER_REPORT_CSV: render_csv(reports.identifier_frame(report)),
            IDENTIFIER_SUMMARY_CSV: render_csv(reports.identifier_summary_frame(report)),
        },
    )


def cmd_flip(config: RunConfig, workers: Optional[int] = None) -> List[Path]:
    """Flipping search for each configured identifier kind, model and task."""
    dataset = _load(config)
    logger.info(
        "Flipping with %s identifiers over %d models",
        ", ".join(k.value for k in config.flip_kinds), len(dataset.model_ids),
    )
    records = flip_sweep(
        dataset,
        kinds=config.flip_kinds,
        backend=config.backend,
        flip_split=config.flip_splits,
        seed=config.seed,
        n_resamples=config.bootstrap_resamples,
        k_grid=config.k_grid,
        workers=_workers(workers),
    )
    return write_atomically(
        config.output_dir, {FLIP_REPORT_CSV: render_csv(reports.flip_frame(records))}
    )


def cmd_report(config: RunConfig) -> List[Path]:
    """Digest the upstream reports into summary.md and plot-data CSVs."""
    tables = reports.read_report_inputs(config.output_dir)
    cohort = cohort_summary(_load(config))
    flip_summary = reports.flip_summary_frame(tables["flips"])
    summary = reports.render_summary(tables["aggregate"], tables["identifier_summary"], flip_summary, cohort)
    return write_atomically(
        config.output_dir,
        {
            SUMMARY_MD: summary,
            PLOT_ODDS_RATIOS_CSV: render_csv(reports.odds_ratio_plot_frame(tables["aggregate"])),
            PLOT_IDENTIFIER_AUROC_CSV: render_csv(tables["identifier_summary"]),
            PLOT_FLIP_F1_CSV: render_csv(flip_summary),
        },
    )


def cmd_run(config: RunConfig, workers: Optional[int] = None, synth: bool = False) -> List[Path]:
    """audit, identify, flip and report in order (after synth when asked)."""
    written: List[Path] = []
    if synth:
        written += cmd_synth(config)
    written += cmd_audit(config, workers)
    written += cmd_identify(config, workers)
    written += cmd_flip(config, workers)
    written += cmd_report(config)
    return written
