# -*- coding: utf-8 -*-
"""
flipaudit Application Package
Cohort data model, label hierarchy, dataset I/O and the error hierarchy.
"""

from src.app.models import (
    TaskName, FindingName, StudyRecord, Dataset, CohortSummary, cohort_summary
)
from src.app.hierarchy import LabelHierarchy, excluded_features
from src.app.dataset_io import load_dataset, write_dataset
from src.app.errors import (  # noqa: F401
    FlipauditError, InputError, SchemaError, HierarchyError, ConfigError,
    MissingPrerequisiteError, ComputationError, DegenerateLabelsError,
    LengthMismatchError, DesignError, SingularDesignError,
    DegenerateTargetError, BootstrapError, FlipSearchError,
)

__version__ = "0.1.0"
__all__ = [
    "TaskName",
    "FindingName",
    "StudyRecord",
    "Dataset",
    "CohortSummary",
    "cohort_summary",
    "LabelHierarchy",
    "excluded_features",
    "load_dataset",
    "write_dataset",
    # Errors
    "FlipauditError",
    "InputError",
    "SchemaError",
    "HierarchyError",
    "ConfigError",
    "MissingPrerequisiteError",
    "ComputationError",
    "DegenerateLabelsError",
    "LengthMismatchError",
    "DesignError",
    "SingularDesignError",
    "DegenerateTargetError",
    "BootstrapError",
    "FlipSearchError",
]
