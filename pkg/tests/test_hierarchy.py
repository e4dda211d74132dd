# -*- coding: utf-8 -*-
"""Tests for src.app.hierarchy - finding ancestry and audit exclusions."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from src.app.errors import HierarchyError
from src.app.hierarchy import LabelHierarchy, excluded_features
from src.app.models import FindingName as F
from src.app.models import TaskName


class TestClosures:

    def test_pneumonia_ancestry_is_transitive(self, hierarchy: LabelHierarchy) -> None:
        assert hierarchy.ancestors(F.PNEUMONIA) == {F.CONSOLIDATION, F.LUNG_OPACITY}

    def test_lung_opacity_descendants(self, hierarchy: LabelHierarchy) -> None:
        assert hierarchy.descendants("Lung Opacity") == {
            F.LUNG_LESION, F.EDEMA, F.CONSOLIDATION, F.PNEUMONIA, F.ATELECTASIS,
        }

    def test_leaf_has_no_descendants(self, hierarchy: LabelHierarchy) -> None:
        assert hierarchy.descendants(F.FRACTURE) == frozenset()


class TestExcludedFeatures:

    def test_consolidation_excludes_ancestry_and_children(self, hierarchy: LabelHierarchy) -> None:
        assert excluded_features(hierarchy, TaskName.CONSOLIDATION) == {
            F.CONSOLIDATION, F.LUNG_OPACITY, F.PNEUMONIA,
        }

    def test_cardiomegaly_excludes_parent(self, hierarchy: LabelHierarchy) -> None:
        assert hierarchy.excluded_features("Cardiomegaly") == {
            F.CARDIOMEGALY, F.ENLARGED_CARDIOMEDIASTINUM,
        }

    def test_siblings_are_kept(self, hierarchy: LabelHierarchy) -> None:
        excluded = hierarchy.excluded_features(TaskName.EDEMA)
        assert F.ATELECTASIS not in excluded
        assert F.LUNG_LESION not in excluded

    def test_pleural_effusion_has_no_relatives(self, hierarchy: LabelHierarchy) -> None:
        assert hierarchy.excluded_features(TaskName.PLEURAL_EFFUSION) == {F.PLEURAL_EFFUSION}


class TestValidation:

    def test_cycle_rejected(self) -> None:
        with pytest.raises(HierarchyError, match="cycle"):
            LabelHierarchy.from_edges([("Edema", "Atelectasis"), ("Atelectasis", "Edema")])

    def test_self_loop_rejected(self) -> None:
        with pytest.raises(HierarchyError):
            LabelHierarchy.from_edges([("Edema", "Edema")])

    def test_unknown_finding_rejected(self) -> None:
        with pytest.raises(HierarchyError, match="unknown finding"):
            LabelHierarchy.from_edges([("Edema", "Rib Notching")])

    def test_malformed_json(self, tmp_path: Path) -> None:
        path = tmp_path / "h.json"
        path.write_text(json.dumps({"edges": [["Edema"]]}), encoding="utf-8")
        with pytest.raises(HierarchyError, match="pair"):
            LabelHierarchy.from_json(path)


class TestPersistence:

    def test_json_round_trip(self, hierarchy: LabelHierarchy, tmp_path: Path) -> None:
        path = tmp_path / "hierarchy.json"
        path.write_text(hierarchy.to_json_text(), encoding="utf-8")
        assert LabelHierarchy.from_json(path) == hierarchy

    def test_written_edges_in_finding_order(self, hierarchy: LabelHierarchy) -> None:
        edges = json.loads(hierarchy.to_json_text())["edges"]
        assert edges[0] == ["Enlarged Cardiomediastinum", "Cardiomegaly"]
        assert len(edges) == 7
