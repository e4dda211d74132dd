# -*- coding: utf-8 -*-
"""
Synthetic cohort generator with planted misclassification signal.

Each (study, model, task) gets a planted misclassification flag drawn from

    logit P(m = 1) = logit(base_rate) + age_effect · (age − 60)
                     + lateral_effect · has_lateral_view
                     + Σ finding_effects[f] · label_f

The flag decides which side of a nominal threshold ``t`` the score lands
on.  The distance to ``t`` (as a fraction ``u`` of the room left on that
side) is Uniform for correct predictions and Beta(1, 1 + κ) for
misclassified ones, so misclassifications crowd around the threshold and
ranking by distance has population AUROC ``1 − 1 / (2 + κ)``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, field_validator
from scipy.special import expit, logit

from src.app.dataset_io import render_csv, render_dataset, write_atomically
from src.app.hierarchy import LabelHierarchy
from src.app.models import Dataset, FindingName, StudyRecord, TaskName
from src.config.constants import SYNTH_RECIPE_JSON, SYNTH_TRUTH_CSV
from src.config.seeding import derive_rng

logger = logging.getLogger(__name__)

AGE_CENTRE = 60.0

DEFAULT_PREVALENCE: Dict[str, float] = {
    FindingName.ENLARGED_CARDIOMEDIASTINUM.value: 0.10,
    FindingName.CARDIOMEGALY.value: 0.15,
    FindingName.LUNG_OPACITY.value: 0.30,
    FindingName.LUNG_LESION.value: 0.05,
    FindingName.EDEMA.value: 0.15,
    FindingName.CONSOLIDATION.value: 0.08,
    FindingName.PNEUMONIA.value: 0.05,
    FindingName.ATELECTASIS.value: 0.20,
    FindingName.PNEUMOTHORAX.value: 0.06,
    FindingName.PLEURAL_EFFUSION.value: 0.20,
    FindingName.PLEURAL_OTHER.value: 0.05,
    FindingName.FRACTURE.value: 0.05,
    FindingName.SUPPORT_DEVICES.value: 0.35,
}


def _default_finding_effects() -> Dict[str, float]:
    return {
        FindingName.SUPPORT_DEVICES.value: 0.5,
        FindingName.PNEUMOTHORAX.value: 0.4,
        FindingName.LUNG_LESION.value: 0.45,
    }


def _check_findings(value: Dict[str, float]) -> Dict[str, float]:
    for name in value:
        FindingName(name)
    return value


class TaskSignal(BaseModel):
    """Planted misclassification log-odds for one task."""
    base_rate: float = Field(default=0.15, gt=0, lt=1, description="Misclassification rate at age 60 with no other effects.")
    age_effect: float = Field(default=0.03, description="Log-odds per year of age above 60.")
    lateral_effect: float = Field(default=-1.0, description="Log-odds when a lateral view is present.")
    finding_effects: Dict[str, float] = Field(
        default_factory=_default_finding_effects, description="Log-odds per positive finding."
    )
    distance_concentration: float = Field(
        default=2.0, ge=0, description="κ: misclassified scores sit Beta(1, 1 + κ) close to the threshold."
    )

    @field_validator("finding_effects")
    @classmethod
    def _known_findings(cls, value: Dict[str, float]) -> Dict[str, float]:
        return _check_findings(value)

    @classmethod
    def null(cls, base_rate: float = 0.15) -> "TaskSignal":
        """No planted effects: misclassification independent of every feature."""
        return cls(base_rate=base_rate, age_effect=0.0, lateral_effect=0.0, finding_effects={})


def _default_signals() -> Dict[TaskName, TaskSignal]:
    return {task: TaskSignal() for task in TaskName}


class SynthSpec(BaseModel):
    """Size, seed and planted signal of a synthetic cohort."""
    n_studies: int = Field(default=700, ge=2, description="Number of studies.")
    n_models: int = Field(default=10, ge=1, description="Number of audited models.")
    seed: int = Field(default=0, ge=0, description="Generator seed.")
    prevalence: Dict[str, float] = Field(
        default_factory=lambda: dict(DEFAULT_PREVALENCE),
        description="Marginal prevalence of each finding before hierarchy closure.",
    )
    lateral_rate: float = Field(default=0.35, ge=0, le=1, description="Share of studies with a lateral view.")
    ap_rate: float = Field(default=0.55, ge=0, le=1, description="Share of studies whose frontal view is AP.")
    threshold_range: Tuple[float, float] = Field(
        default=(0.3, 0.6), description="Nominal per-(model, task) thresholds are drawn uniformly from this range."
    )
    signals: Dict[TaskName, TaskSignal] = Field(default_factory=_default_signals, description="Planted signal per task.")

    @field_validator("prevalence")
    @classmethod
    def _valid_prevalence(cls, value: Dict[str, float]) -> Dict[str, float]:
        for name, rate in _check_findings(value).items():
            if name == FindingName.NO_FINDING.value:
                raise ValueError("No Finding prevalence is derived, not set")
            if not 0 < rate < 1:
                raise ValueError(f"prevalence of {name} must lie in (0, 1), got {rate}")
        return value

    @field_validator("threshold_range")
    @classmethod
    def _valid_range(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        low, high = value
        if not 0 < low <= high < 1:
            raise ValueError(f"threshold_range must satisfy 0 < low <= high < 1, got {value}")
        return value

    def signal(self, task: TaskName) -> TaskSignal:
        return self.signals.get(task, TaskSignal())

    @classmethod
    def null(cls, **kwargs) -> "SynthSpec":
        return cls(signals={task: TaskSignal.null() for task in TaskName}, **kwargs)


def model_ids(n_models: int) -> Tuple[str, ...]:
    return tuple(f"model_{i + 1:02d}" for i in range(n_models))


def _clinical(spec: SynthSpec) -> Dict[str, np.ndarray]:
    rng = derive_rng(spec.seed, "synth", "clinical")
    n = spec.n_studies
    age = np.clip(np.rint(rng.normal(AGE_CENTRE, 17.0, n)), 18, 95)
    sex = (rng.random(n) < 0.59).astype(int)
    lateral = (rng.random(n) < spec.lateral_rate).astype(int)
    is_ap = rng.random(n) < spec.ap_rate
    extra = rng.random(n)
    num_ap = np.where(is_ap, 1 + (extra < 0.15), (extra < 0.05)).astype(int)
    num_pa = np.where(is_ap, (extra > 0.95), 1).astype(int)
    return {"age": age, "sex": sex, "lateral": lateral, "num_ap": num_ap, "num_pa": num_pa}


def _findings(spec: SynthSpec, hierarchy: LabelHierarchy) -> Dict[FindingName, np.ndarray]:
    rng = derive_rng(spec.seed, "synth", "findings")
    n = spec.n_studies
    labels = {
        f: (rng.random(n) < spec.prevalence.get(f.value, 0.05)).astype(int)
        for f in FindingName
        if f is not FindingName.NO_FINDING
    }
    for finding in list(labels):
        for ancestor in hierarchy.ancestors(finding):
            labels[ancestor] = labels[ancestor] | labels[finding]
    pathology = np.zeros(n, dtype=int)
    for finding, values in labels.items():
        if finding is not FindingName.SUPPORT_DEVICES:
            pathology |= values
    labels[FindingName.NO_FINDING] = 1 - pathology
    return {f: labels[f] for f in FindingName}


def misclassification_probability(
    signal: TaskSignal, age: np.ndarray, lateral: np.ndarray, findings: Dict[FindingName, np.ndarray]
) -> np.ndarray:
    eta = logit(signal.base_rate) + signal.age_effect * (age - AGE_CENTRE) + signal.lateral_effect * lateral
    for name, effect in signal.finding_effects.items():
        eta = eta + effect * findings[FindingName(name)]
    return expit(eta)


@dataclass(frozen=True)
class SynthResult:
    dataset: Dataset
    truth: pd.DataFrame


def generate_dataset(spec: SynthSpec, hierarchy: LabelHierarchy | None = None) -> SynthResult:
    """Build the cohort in memory, with the planted truth per (study, model, task)."""
    hierarchy = hierarchy or LabelHierarchy.default()
    clinical = _clinical(spec)
    findings = _findings(spec, hierarchy)
    n = spec.n_studies
    ids = tuple(f"study_{i + 1:04d}" for i in range(n))
    models = model_ids(spec.n_models)
    low, high = spec.threshold_range

    scores: Dict[Tuple[str, TaskName], np.ndarray] = {}
    truth_frames = []
    for task in TaskName:
        signal = spec.signal(task)
        probability = misclassification_probability(signal, clinical["age"], clinical["lateral"], findings)
        labels = findings[FindingName(task.value)]
        for model_id in models:
            rng = derive_rng(spec.seed, "synth", "scores", model_id, task.value)
            t = float(rng.uniform(low, high))
            planted = (rng.random(n) < probability).astype(int)
            side = labels ^ planted
            u = np.where(
                planted == 1,
                rng.beta(1.0, 1.0 + signal.distance_concentration, n),
                rng.random(n),
            )
            scores[(model_id, task)] = np.where(side == 1, t + (1.0 - t) * u, t - t * u)
            truth_frames.append(
                pd.DataFrame(
                    {
                        "study_id": ids,
                        "model_id": model_id,
                        "task": task.value,
                        "nominal_threshold": t,
                        "misclass_probability": probability,
                        "planted_misclassified": planted,
                    }
                )
            )

    studies = tuple(
        StudyRecord(
            study_id=ids[i],
            age=float(clinical["age"][i]),
            sex=int(clinical["sex"][i]),
            has_lateral_view=bool(clinical["lateral"][i]),
            num_ap_views=int(clinical["num_ap"][i]),
            num_pa_views=int(clinical["num_pa"][i]),
            labels={f: int(findings[f][i]) for f in FindingName},
            outputs={key: float(values[i]) for key, values in scores.items()},
        )
        for i in range(n)
    )
    dataset = Dataset(studies=studies, model_ids=models, hierarchy=hierarchy)
    logger.debug("Generated %d studies x %d models", n, len(models))
    return SynthResult(dataset=dataset, truth=pd.concat(truth_frames, ignore_index=True))


def synth_generate(spec: SynthSpec, directory: Path | str) -> Dict[str, Path]:
    """Write studies.csv, outputs.csv, hierarchy.json, the planted truth and the recipe."""
    directory = Path(directory)
    result = generate_dataset(spec)
    files = render_dataset(result.dataset)
    files[SYNTH_TRUTH_CSV] = render_csv(result.truth)
    files[SYNTH_RECIPE_JSON] = json.dumps(spec.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
    studies_path, outputs_path, hierarchy_path, truth_path, recipe_path = write_atomically(directory, files)
    logger.info(
        "Synthetic cohort: %d studies, %d models -> %s", spec.n_studies, spec.n_models, directory
    )
    return {
        "studies": studies_path,
        "outputs": outputs_path,
        "hierarchy": hierarchy_path,
        "truth": truth_path,
        "recipe": recipe_path,
    }
