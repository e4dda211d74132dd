# -*- coding: utf-8 -*-
"""
Run configuration.

A run is described by one YAML file::

    inputs:
      studies: data/synthetic/studies.csv
      outputs: data/synthetic/outputs.csv
      hierarchy: data/synthetic/hierarchy.json
    output_dir: outputs
    seed: 0
    bootstrap_resamples: 1000
    backend: {kind: gradient_boosted_trees, trees: {n_rounds: 100, ...}}
    ...

Every key is optional; missing keys take the defaults below.  Relative
paths are resolved against the directory holding the config file, so a
config and its inputs can move together.  ``flipaudit init-config`` writes
the defaults with each section preceded by its description.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, List, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from src.app.errors import ConfigError
from src.audit.glm import GLMSettings
from src.config.constants import (
    HIERARCHY_JSON,
    OUTPUTS_CSV,
    OUTPUT_DIR,
    STUDIES_CSV,
    SYNTH_DIR,
    THREADS_ENV_VAR,
)
from src.flipping.experiment import FLIP_KINDS, FlipSplitSpec
from src.identifiers.backends import ClassifierBackendSpec
from src.identifiers.evaluation import SplitSpec
from src.identifiers.features import IdentifierKind
from src.services.synthetic import SynthSpec

logger = logging.getLogger(__name__)


class InputPaths(BaseModel):
    """Where the cohort files live."""
    studies: Path = Field(default=SYNTH_DIR / STUDIES_CSV, description="Per-study clinical features and labels.")
    outputs: Path = Field(default=SYNTH_DIR / OUTPUTS_CSV, description="Per (study, model, task) scores.")
    hierarchy: Optional[Path] = Field(
        default=SYNTH_DIR / HIERARCHY_JSON,
        description="Finding parent/child edges; null uses the built-in hierarchy.",
    )


class RunConfig(BaseModel):
    """Everything a flipaudit run depends on besides the input files."""

    inputs: InputPaths = Field(default_factory=InputPaths, description="Input CSV and hierarchy paths.")
    output_dir: Path = Field(default=OUTPUT_DIR, description="Directory receiving every report file.")
    synth_dir: Path = Field(default=SYNTH_DIR, description="Directory `flipaudit synth` writes the synthetic cohort to.")
    seed: int = Field(default=0, ge=0, description="Master seed; every random stream is derived from it.")
    bootstrap_resamples: int = Field(default=1000, ge=0, description="Bootstrap resamples per confidence interval.")
    glm: GLMSettings = Field(default_factory=GLMSettings, description="IRLS settings of the misclassification audits.")
    backend: ClassifierBackendSpec = Field(
        default_factory=ClassifierBackendSpec, description="Classifier trained by the misclassification identifiers."
    )
    identifier_splits: SplitSpec = Field(
        default_factory=SplitSpec, description="Random train/test splits for identifier evaluation."
    )
    flip_splits: FlipSplitSpec = Field(
        default_factory=FlipSplitSpec, description="Random train/validation/test splits for flipping."
    )
    flip_kinds: List[IdentifierKind] = Field(
        default_factory=lambda: list(FLIP_KINDS), description="Identifier kinds whose likelihoods drive flipping."
    )
    k_grid: Optional[List[int]] = Field(
        default=None,
        description="Candidate k values for flipping; null uses 1..ceil(n/10) plus ceil(n/8) and ceil(n/4).",
    )
    synth: SynthSpec = Field(default_factory=SynthSpec, description="Synthetic cohort written by `flipaudit synth`.")

    @field_validator("k_grid")
    @classmethod
    def _non_negative_k(cls, value: Optional[List[int]]) -> Optional[List[int]]:
        if value is not None:
            if not value:
                raise ValueError("k_grid must not be empty; use null for the default grid")
            if min(value) < 0:
                raise ValueError("k_grid values must be >= 0")
        return value

    def resolved(self, base_dir: Path | str) -> "RunConfig":
        """Copy with every relative path anchored at *base_dir*."""
        base = Path(base_dir)

        def anchor(path: Optional[Path]) -> Optional[Path]:
            if path is None or path.is_absolute():
                return path
            return base / path

        inputs = self.inputs.model_copy(
            update={
                "studies": anchor(self.inputs.studies),
                "outputs": anchor(self.inputs.outputs),
                "hierarchy": anchor(self.inputs.hierarchy),
            }
        )
        return self.model_copy(
            update={"inputs": inputs, "output_dir": anchor(self.output_dir), "synth_dir": anchor(self.synth_dir)}
        )

    def with_overrides(self, seed: Optional[int] = None, output_dir: Optional[Path] = None) -> "RunConfig":
        """Apply the CLI's ``--seed`` / ``--out`` overrides."""
        update: dict[str, Any] = {}
        if seed is not None:
            update["seed"] = seed
            update["synth"] = self.synth.model_copy(update={"seed": seed})
        if output_dir is not None:
            update["output_dir"] = Path(output_dir)
        return self.model_copy(update=update) if update else self


# ------------------------------------------------------------------ #
# Load / save
# ------------------------------------------------------------------ #

def _validation_message(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        where = ".".join(str(p) for p in error["loc"]) or "config"
        parts.append(f"{where}: {error['msg']}")
    return "; ".join(parts)


def parse_config(data: Any, source: str = "config") -> RunConfig:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping, got {type(data).__name__}")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"{source}: {_validation_message(exc)}") from None


def load_config(path: Path | str | None = None) -> RunConfig:
    """Load *path* (defaults when ``None``) with paths resolved.

    Without a file, relative paths resolve against the working directory.
    """
    if path is None:
        return RunConfig().resolved(Path.cwd())
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from None
    config = parse_config(data, str(path))
    logger.debug("Loaded config from %s", path)
    return config.resolved(path.parent.resolve())


def render_config(config: Optional[RunConfig] = None) -> str:
    """YAML text of *config* with each top-level key preceded by its description."""
    config = config or RunConfig()
    data = config.model_dump(mode="json")
    blocks = ["# flipaudit run configuration", ""]
    for name, info in RunConfig.model_fields.items():
        if info.description:
            blocks.append(f"# {info.description}")
        blocks.append(
            yaml.safe_dump({name: data[name]}, sort_keys=False, default_flow_style=False).rstrip("\n")
        )
        blocks.append("")
    return "\n".join(blocks)


def save_config(path: Path | str, config: Optional[RunConfig] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_config(config), encoding="utf-8")
    logger.info("Config written to %s", path)
    return path


# ------------------------------------------------------------------ #
# Environment
# ------------------------------------------------------------------ #

def resolve_workers() -> int:
    """Worker threads allowed by ``FLIPAUDIT_THREADS`` (default 1)."""
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}") from None
    if workers < 1:
        raise ConfigError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
    return workers
