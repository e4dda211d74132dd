# -*- coding: utf-8 -*-
"""
Percentile bootstrap confidence intervals over study indices.

Resample *i* draws from ``default_rng([seed, i])``, so every resample is a
pure function of (seed, i): evaluating them on a thread pool gives results
bit-identical to a sequential loop.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from src.app.errors import BootstrapError, DegenerateLabelsError
from src.config.constants import BOOTSTRAP_REDRAW_CAP, DEFAULT_BOOTSTRAP_RESAMPLES

logger = logging.getLogger(__name__)

Statistic = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class BootstrapCI:
    point: float
    lower: float
    upper: float
    n_resamples: int
    seed: int

    @classmethod
    def constant(cls, value: float, n_resamples: int, seed: int) -> "BootstrapCI":
        return cls(point=value, lower=value, upper=value, n_resamples=n_resamples, seed=seed)


class UndefinedStatistic(Exception):
    """Raised by a statistic when it has no value on a resample."""


def _evaluate(statistic: Statistic, indices: np.ndarray) -> float | None:
    try:
        value = float(statistic(indices))
    except (UndefinedStatistic, DegenerateLabelsError):
        return None
    return value if math.isfinite(value) else None


def _resample(statistic: Statistic, n: int, seed: int, i: int) -> float:
    rng = np.random.default_rng([seed, i])
    for _ in range(1 + BOOTSTRAP_REDRAW_CAP):
        value = _evaluate(statistic, rng.integers(0, n, size=n))
        if value is not None:
            return value
    raise BootstrapError(
        f"statistic undefined on resample {i} after {BOOTSTRAP_REDRAW_CAP} redraws"
    )


def bootstrap_ci(
    statistic: Statistic,
    n: int,
    n_resamples: int = DEFAULT_BOOTSTRAP_RESAMPLES,
    seed: int = 0,
    workers: int = 1,
) -> BootstrapCI:
    """95 % percentile interval of *statistic* over *n_resamples* resamples.

    *statistic* receives an index array into the sample (with repetitions)
    and returns a float; raising :class:`UndefinedStatistic` or
    :class:`DegenerateLabelsError`, or returning a non-finite value, marks
    the resample undefined and it is redrawn.
    """
    if n < 1:
        raise ValueError("bootstrap needs at least one observation")
    point = _evaluate(statistic, np.arange(n))
    if point is None:
        raise BootstrapError("statistic undefined on the full sample")
    if n_resamples <= 0:
        return BootstrapCI.constant(point, 0, seed)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(lambda i: _resample(statistic, n, seed, i), range(n_resamples)))
    else:
        values = [_resample(statistic, n, seed, i) for i in range(n_resamples)]

    lower, upper = np.percentile(np.asarray(values), [2.5, 97.5])
    return BootstrapCI(
        point=point,
        lower=float(lower),
        upper=float(upper),
        n_resamples=n_resamples,
        seed=seed,
    )
