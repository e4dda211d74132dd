# -*- coding: utf-8 -*-
"""
Pluggable binary-classifier backends for the misclassification identifiers.

A backend turns ``(X, y, seed)`` into a fitted object with
``predict_proba(X) -> P(y = 1)``.  Two are provided: the in-house
gradient-boosted trees (default) and IRLS logistic regression.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Protocol

import numpy as np
from pydantic import BaseModel, Field
from scipy.special import expit

from src.app.errors import SingularDesignError
from src.audit.glm import FitReport, GLMSettings, fit_logistic
from src.identifiers.gbdt import GBDTParams, fit_gbdt

logger = logging.getLogger(__name__)


class BackendKind(str, Enum):
    GRADIENT_BOOSTED_TREES = "gradient_boosted_trees"
    LOGISTIC = "logistic"

    def __str__(self) -> str:
        return self.value


class ClassifierBackendSpec(BaseModel):
    """Which classifier the identifiers train, and its hyper-parameters."""
    kind: BackendKind = Field(
        default=BackendKind.GRADIENT_BOOSTED_TREES,
        description="gradient_boosted_trees or logistic.",
    )
    trees: GBDTParams = Field(default_factory=GBDTParams, description="Gradient-boosted tree settings.")
    ridge: float = Field(default=1e-6, ge=0, description="Ridge penalty of the logistic backend.")


class FittedClassifier(Protocol):
    def predict_proba(self, X: np.ndarray) -> np.ndarray: ...


class LogisticClassifier:
    """Logistic fit on the non-constant columns of the training design."""

    def __init__(self, columns: np.ndarray, report: FitReport, n_features: int) -> None:
        self.columns = columns
        self.report = report
        self.n_features = n_features
        self._beta = np.array([f.coefficient for f in report.features])

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return expit(self.report.intercept.coefficient + X[:, self.columns] @ self._beta)


def _fit_logistic_backend(X: np.ndarray, y: np.ndarray, ridge: float) -> LogisticClassifier:
    X = np.asarray(X, dtype=float)
    names = [str(j) for j in range(X.shape[1])]
    columns = [j for j in range(X.shape[1]) if np.ptp(X[:, j]) > 0]
    settings = GLMSettings(ridge=ridge)
    while True:
        try:
            report = fit_logistic(X[:, columns], y, settings, [names[j] for j in columns])
            break
        except SingularDesignError as exc:
            dropped = {int(c) for c in exc.columns if c != "intercept"}
            if not dropped:
                raise
            logger.debug("Logistic backend dropping collinear columns %s", sorted(dropped))
            columns = [j for j in columns if j not in dropped]
    return LogisticClassifier(np.array(columns, dtype=int), report, X.shape[1])


def fit_backend(spec: ClassifierBackendSpec, X: np.ndarray, y: np.ndarray, seed: int) -> FittedClassifier:
    """Fit the classifier *spec* describes."""
    if spec.kind is BackendKind.LOGISTIC:
        return _fit_logistic_backend(X, y, spec.ridge)
    return fit_gbdt(X, y, spec.trees, seed)
