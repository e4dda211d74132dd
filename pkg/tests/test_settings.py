# -*- coding: utf-8 -*-
"""Tests for src.config - run configuration, worker resolution and seeding."""

from __future__ import annotations

import os
from pathlib import Path
from unittest.mock import patch

import pytest

from src.app.errors import ConfigError
from src.config.seeding import derive_rng, derive_seed
from src.config.settings import (
    RunConfig,
    load_config,
    parse_config,
    render_config,
    resolve_workers,
    save_config,
)
from src.identifiers.backends import BackendKind
from src.identifiers.features import IdentifierKind


class TestRunConfig:

    def test_defaults(self) -> None:
        config = RunConfig()
        assert config.seed == 0
        assert config.bootstrap_resamples == 1000
        assert config.backend.kind is BackendKind.GRADIENT_BOOSTED_TREES
        assert config.identifier_splits.n_repeats == 5
        assert config.flip_kinds == [IdentifierKind.SAME_LABEL, IdentifierKind.ALL_LABELS]
        assert config.k_grid is None

    def test_empty_k_grid_rejected(self) -> None:
        with pytest.raises(ConfigError, match="k_grid"):
            parse_config({"k_grid": []})

    def test_validation_error_names_field(self) -> None:
        with pytest.raises(ConfigError, match="backend.trees.max_depth"):
            parse_config({"backend": {"trees": {"max_depth": 0}}})

    def test_top_level_must_be_mapping(self) -> None:
        with pytest.raises(ConfigError, match="mapping"):
            parse_config([1, 2])

    def test_overrides(self) -> None:
        config = RunConfig().with_overrides(seed=9, output_dir=Path("elsewhere"))
        assert config.seed == 9 and config.synth.seed == 9
        assert config.output_dir == Path("elsewhere")
        assert RunConfig().with_overrides() == RunConfig()


class TestLoadAndSave:

    def test_rendered_defaults_load_back(self, tmp_path: Path) -> None:
        path = save_config(tmp_path / "flipaudit.yaml")
        assert load_config(path) == RunConfig().resolved(tmp_path.resolve())

    def test_rendered_text_is_commented(self) -> None:
        text = render_config()
        assert "# Master seed" in text
        assert "seed: 0" in text

    def test_relative_paths_follow_config_file(self, tmp_path: Path) -> None:
        path = tmp_path / "cfg" / "run.yaml"
        path.parent.mkdir()
        path.write_text("inputs:\n  studies: cohort/studies.csv\n  hierarchy: null\noutput_dir: out\n", encoding="utf-8")
        config = load_config(path)
        base = path.parent.resolve()
        assert config.inputs.studies == base / "cohort" / "studies.csv"
        assert config.inputs.hierarchy is None
        assert config.output_dir == base / "out"

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "nope.yaml")

    def test_invalid_yaml(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.yaml"
        path.write_text("seed: [1, 2\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="invalid YAML"):
            load_config(path)

    def test_empty_file_means_defaults(self, tmp_path: Path) -> None:
        path = tmp_path / "empty.yaml"
        path.write_text("", encoding="utf-8")
        assert load_config(path).seed == 0


class TestResolveWorkers:

    def test_default_is_one(self) -> None:
        with patch.dict(os.environ, {}, clear=True):
            assert resolve_workers() == 1

    def test_from_environment(self) -> None:
        with patch.dict(os.environ, {"FLIPAUDIT_THREADS": "4"}):
            assert resolve_workers() == 4

    @pytest.mark.parametrize("raw", ["zero", "0", "-2"])
    def test_invalid_values(self, raw: str) -> None:
        with patch.dict(os.environ, {"FLIPAUDIT_THREADS": raw}):
            with pytest.raises(ConfigError):
                resolve_workers()


class TestSeeding:

    def test_stable_and_label_sensitive(self) -> None:
        assert derive_seed(0, "a", 1) == derive_seed(0, "a", 1)
        assert derive_seed(0, "a", 1) != derive_seed(0, "a", 2)
        assert derive_seed(0, "a") != derive_seed(1, "a")
        assert 0 <= derive_seed(123, "x") < 2**63

    def test_rng_streams_repeat(self) -> None:
        assert derive_rng(5, "split").random() == derive_rng(5, "split").random()
