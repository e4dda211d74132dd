# -*- coding: utf-8 -*-
"""
Logistic regression by iteratively reweighted least squares, with Wald
inference.

Each Newton step solves ``(XᵀWX + λI) Δ = Xᵀ(y − p) − λβ`` where
``W = diag(p(1 − p))``.  Standard errors come from the inverse of the
(penalised) observed information at the final coefficients, p-values are
two-sided normal on ``z = β / SE``, and odds ratios are ``exp(β)`` with
Wald bounds ``exp(β ± 1.96·SE)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.special import expit
from scipy.stats import norm

from src.app.errors import DesignError, LengthMismatchError, SingularDesignError
from src.config.constants import SIGNIFICANCE_LEVEL, WALD_Z

logger = logging.getLogger(__name__)

INTERCEPT = "intercept"

# Past this linear-predictor magnitude fitted probabilities are 0/1 to
# double precision: the likelihood has no finite maximiser.
SEPARATION_ETA_BOUND = 30.0


class GLMSettings(BaseModel):
    """IRLS controls."""
    max_iter: int = Field(default=100, ge=1, description="Maximum Newton iterations.")
    tol: float = Field(default=1e-8, gt=0, description="Convergence tolerance on max |Δβ|.")
    ridge: float = Field(
        default=0.0,
        ge=0,
        description="Ridge penalty on all coefficients; 1e-6 stabilises near-separated fits.",
    )


@dataclass(frozen=True)
class FeatureStat:
    """Wald inference for one coefficient."""
    name: str
    coefficient: float
    std_error: float
    z_value: float
    p_value: float
    odds_ratio: float
    or_ci_lower: float
    or_ci_upper: float

    @property
    def significant(self) -> bool:
        return self.p_value < SIGNIFICANCE_LEVEL


@dataclass(frozen=True)
class FitReport:
    """Coefficients and fit diagnostics of one logistic model."""
    intercept: FeatureStat
    features: Tuple[FeatureStat, ...]
    converged: bool
    n_iterations: int
    log_likelihood: float
    null_log_likelihood: float
    n_observations: int
    diagnostic: Optional[str] = None

    @property
    def feature_names(self) -> Tuple[str, ...]:
        return tuple(f.name for f in self.features)

    def feature(self, name: str) -> FeatureStat:
        for stat in self.features:
            if stat.name == name:
                return stat
        raise KeyError(name)

    @property
    def pseudo_r2(self) -> float:
        """McFadden's 1 − ℓ / ℓ₀."""
        if self.null_log_likelihood == 0:
            return 0.0
        return 1.0 - self.log_likelihood / self.null_log_likelihood

    @property
    def aic(self) -> float:
        return 2.0 * (len(self.features) + 1) - 2.0 * self.log_likelihood


def _log_likelihood(y: np.ndarray, eta: np.ndarray) -> float:
    # y·η − log(1 + e^η), stable for large |η|
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def _collinear_columns(X: np.ndarray, names: Sequence[str]) -> list[str]:
    """Columns that add no rank when appended left to right."""
    kept: list[int] = []
    dependent: list[str] = []
    for j in range(X.shape[1]):
        candidate = kept + [j]
        if np.linalg.matrix_rank(X[:, candidate]) == len(candidate):
            kept.append(j)
        else:
            dependent.append(names[j])
    return dependent


def _stat(name: str, beta: float, se: float) -> FeatureStat:
    z = beta / se if se > 0 else math.copysign(math.inf, beta) if beta else 0.0
    return FeatureStat(
        name=name,
        coefficient=float(beta),
        std_error=float(se),
        z_value=float(z),
        p_value=float(2.0 * norm.sf(abs(z))),
        odds_ratio=float(np.exp(beta)),
        or_ci_lower=float(np.exp(beta - WALD_Z * se)),
        or_ci_upper=float(np.exp(beta + WALD_Z * se)),
    )


def fit_logistic(
    X: np.ndarray,
    y: np.ndarray,
    settings: GLMSettings | None = None,
    feature_names: Sequence[str] | None = None,
) -> FitReport:
    """Fit ``logit P(y=1) = β₀ + Xβ`` and return Wald inference per feature.

    *X* excludes the intercept column, which is always prepended.
    """
    settings = settings or GLMSettings()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if y.shape != (n,):
        raise LengthMismatchError(f"design has {n} rows but response has {y.shape[0]} entries")
    names = list(feature_names) if feature_names is not None else [f"x{j + 1}" for j in range(k)]
    if len(names) != k:
        raise LengthMismatchError(f"{len(names)} feature names for {k} columns")

    constant = [names[j] for j in range(k) if np.ptp(X[:, j]) == 0] if n else names
    if constant:
        raise DesignError(constant)

    design = np.column_stack([np.ones(n), X])
    all_names = [INTERCEPT, *names]
    if np.linalg.matrix_rank(design) < k + 1:
        raise SingularDesignError(_collinear_columns(design, all_names))

    penalty = settings.ridge * np.eye(k + 1)
    beta = np.zeros(k + 1)
    converged = False
    diagnostic: Optional[str] = None
    iterations = 0

    for iterations in range(1, settings.max_iter + 1):
        eta = design @ beta
        p = expit(eta)
        w = p * (1.0 - p)
        information = design.T @ (design * w[:, None]) + penalty
        score = design.T @ (y - p) - settings.ridge * beta
        try:
            step = np.linalg.solve(information, score)
        except np.linalg.LinAlgError:
            raise SingularDesignError(_collinear_columns(design * np.sqrt(w)[:, None], all_names)) from None
        beta = beta + step
        if np.max(np.abs(step)) < settings.tol:
            converged = True
            break
        if np.max(np.abs(design @ beta)) > SEPARATION_ETA_BOUND:
            diagnostic = (
                "perfect or quasi-complete separation: linear predictor exceeded "
                f"±{SEPARATION_ETA_BOUND:g} at iteration {iterations}"
            )
            break

    if not converged and diagnostic is None:
        diagnostic = f"did not converge within {settings.max_iter} iterations"
    if diagnostic:
        logger.warning("Logistic fit flagged: %s", diagnostic)

    eta = design @ beta
    p = expit(eta)
    w = p * (1.0 - p)
    information = design.T @ (design * w[:, None]) + penalty
    try:
        covariance = np.linalg.inv(information)
        se = np.sqrt(np.clip(np.diag(covariance), 0.0, None))
    except np.linalg.LinAlgError:
        if converged:
            raise SingularDesignError(_collinear_columns(design * np.sqrt(w)[:, None], all_names)) from None
        se = np.full(k + 1, np.inf)

    rate = float(np.clip(y.mean(), 1e-12, 1 - 1e-12)) if n else 0.5
    null_ll = float(np.sum(y * np.log(rate) + (1 - y) * np.log(1 - rate)))
    stats = [_stat(name, b, s) for name, b, s in zip(all_names, beta, se)]
    return FitReport(
        intercept=stats[0],
        features=tuple(stats[1:]),
        converged=converged,
        n_iterations=iterations,
        log_likelihood=_log_likelihood(y, eta),
        null_log_likelihood=null_ll,
        n_observations=n,
        diagnostic=diagnostic,
    )
