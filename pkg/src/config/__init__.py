# -*- coding: utf-8 -*-
"""
Configuration Package
Shared constants, logging setup, seed derivation and the run configuration.

``src.config.settings`` is not imported here: it depends on the analysis
packages, which themselves import from ``src.config``.
"""

from src.config.log import setup_logging  # noqa: F401
from src.config.seeding import derive_rng, derive_seed  # noqa: F401
from src.config.constants import (  # noqa: F401
    CLINICAL_FEATURES,
    DEFAULT_BOOTSTRAP_RESAMPLES,
    FINDING_NAMES,
    OUTPUT_DIR,
    TASK_NAMES,
)

__all__ = [
    "setup_logging",
    "derive_rng",
    "derive_seed",
    "CLINICAL_FEATURES",
    "DEFAULT_BOOTSTRAP_RESAMPLES",
    "FINDING_NAMES",
    "OUTPUT_DIR",
    "TASK_NAMES",
]
