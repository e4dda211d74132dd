# -*- coding: utf-8 -*-
"""
Audit Package
Logistic-regression audits of which features predict misclassification.
"""

from src.audit.glm import FitReport, GLMSettings, fit_logistic
from src.audit.design import FeatureKind, design_matrix, design_spec
from src.audit.auditor import (
    aggregate_across_models, audit_age_comorbidity, audit_clinical, audit_findings, audit_sweep
)

__all__ = [
    "FitReport",
    "GLMSettings",
    "fit_logistic",
    "FeatureKind",
    "design_matrix",
    "design_spec",
    "aggregate_across_models",
    "audit_age_comorbidity",
    "audit_clinical",
    "audit_findings",
    "audit_sweep",
]
