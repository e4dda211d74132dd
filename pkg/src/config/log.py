# -*- coding: utf-8 -*-
"""
Centralized logging configuration.

Call :func:`setup_logging` once from the entry-point (``main.py``)
before running any command to ensure consistent output.

Console output stays as bare ``%(message)s`` lines.  An optional log file
gets timestamps and logger names.  Nothing is ever logged into the run
output directory, which must stay byte-identical between runs.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Optional

_CONFIGURED = False

# ── Third-party loggers to keep quiet ──────────────────────────────
_NOISY_LOGGERS = (
    "numexpr",
)


def _suppress_noisy_loggers() -> None:
    """Set third-party library loggers to WARNING-only."""
    for name in _NOISY_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


def setup_logging(level: int = logging.INFO, log_file: Optional[Path] = None) -> None:
    """Configure the root logger with a clean console format.

    Uses ``%(message)s`` so progress lines read like plain CLI output.
    When *log_file* is given, a second handler writes timestamped records
    there as well.
    """
    global _CONFIGURED
    if _CONFIGURED:
        logging.getLogger().setLevel(level)
        return

    handler = logging.StreamHandler(sys.stdout)
    handler.setFormatter(logging.Formatter("%(message)s"))

    root = logging.getLogger()
    root.setLevel(level)
    root.addHandler(handler)

    if log_file is not None:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(str(log_file), encoding="utf-8")
        file_handler.setFormatter(
            logging.Formatter(
                "%(asctime)s  %(levelname)-8s  %(name)s  %(message)s",
                datefmt="%H:%M:%S",
            )
        )
        root.addHandler(file_handler)

    _suppress_noisy_loggers()
    _CONFIGURED = True
