# -*- coding: utf-8 -*-
"""
Shared constants for flipaudit.

Single source of truth for values that are used across multiple modules.
Import from here instead of hardcoding magic numbers.
"""

from pathlib import Path

# Cohort schema
TASK_NAMES: tuple[str, ...] = (
    "Atelectasis",
    "Cardiomegaly",
    "Pleural Effusion",
    "Consolidation",
    "Edema",
)

FINDING_NAMES: tuple[str, ...] = (
    "No Finding",
    "Enlarged Cardiomediastinum",
    "Cardiomegaly",
    "Lung Opacity",
    "Lung Lesion",
    "Edema",
    "Consolidation",
    "Pneumonia",
    "Atelectasis",
    "Pneumothorax",
    "Pleural Effusion",
    "Pleural Other",
    "Fracture",
    "Support Devices",
)

CLINICAL_FEATURES: tuple[str, ...] = (
    "age",
    "sex",
    "has_lateral_view",
    "num_ap_views",
    "num_pa_views",
)

NO_FINDING: str = "No Finding"

# Input / output files
STUDIES_CSV: str = "studies.csv"
OUTPUTS_CSV: str = "outputs.csv"
HIERARCHY_JSON: str = "hierarchy.json"
SYNTH_TRUTH_CSV: str = "synth_truth.csv"
SYNTH_RECIPE_JSON: str = "synth_recipe.json"

AUDIT_REPORT_CSV: str = "audit_report.csv"
AUDIT_AGGREGATE_CSV: str = "audit_aggregate.csv"
IDENTIFIER_REPORT_CSV: str = "identifier_report.csv"
IDENTIFIER_SUMMARY_CSV: str = "identifier_summary.csv"
FLIP_REPORT_CSV: str = "flip_report.csv"
SUMMARY_MD: str = "summary.md"
PLOT_ODDS_RATIOS_CSV: str = "plot_odds_ratios.csv"
PLOT_IDENTIFIER_AUROC_CSV: str = "plot_identifier_auroc.csv"
PLOT_FLIP_F1_CSV: str = "plot_flip_f1.csv"

OUTPUT_DIR: Path = Path("outputs")
SYNTH_DIR: Path = Path("data") / "synthetic"

# 12 significant digits keeps write -> load -> write stable
FLOAT_FORMAT: str = "%.12g"

# Statistics
SIGNIFICANCE_LEVEL: float = 0.05
WALD_Z: float = 1.96
DEFAULT_BOOTSTRAP_RESAMPLES: int = 1000
BOOTSTRAP_REDRAW_CAP: int = 10
CALIBRATION_FRACTION: float = 0.72  # 504 of 700 studies

# Report display
WIDE_INTERVAL_UPPER: float = 10.0
WIDE_INTERVAL_LOWER: float = 0.1

# Environment
THREADS_ENV_VAR: str = "FLIPAUDIT_THREADS"
