# -*- coding: utf-8 -*-
"""
Label Hierarchy - directed ancestry over the fourteen findings.

Design:
  - Edges are (parent, child) pairs of :class:`FindingName`.
  - Ancestor / descendant closures are computed once at construction.
  - The default ontology ships as ``default_hierarchy.json`` next to this
    module so it can be corrected without touching code.
  - ``excluded_features(task)`` is the task itself plus its full ancestry
    and descendancy; siblings are never excluded.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Tuple

from src.app.errors import HierarchyError
from src.app.models import FindingName, TaskName

logger = logging.getLogger(__name__)

_DEFAULT_HIERARCHY_FILE = Path(__file__).with_name("default_hierarchy.json")

Edge = Tuple[FindingName, FindingName]


@dataclass(frozen=True)
class LabelHierarchy:
    """Immutable, acyclic parent → child relation over findings."""

    edges: FrozenSet[Edge] = frozenset()

    _descendants: Dict[FindingName, FrozenSet[FindingName]] = field(
        init=False, repr=False, compare=False
    )
    _ancestors: Dict[FindingName, FrozenSet[FindingName]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        edges = frozenset((_finding(p), _finding(c)) for p, c in self.edges)
        object.__setattr__(self, "edges", edges)

        children: Dict[FindingName, set[FindingName]] = {f: set() for f in FindingName}
        for parent, child in edges:
            children[parent].add(child)

        descendants: Dict[FindingName, FrozenSet[FindingName]] = {}
        for node in FindingName:
            reached: set[FindingName] = set()
            stack = list(children[node])
            while stack:
                current = stack.pop()
                if current in reached:
                    continue
                reached.add(current)
                stack.extend(children[current])
            if node in reached:
                raise HierarchyError(f"hierarchy contains a cycle through {node.value}")
            descendants[node] = frozenset(reached)

        ancestors = {
            node: frozenset(other for other in FindingName if node in descendants[other])
            for node in FindingName
        }
        object.__setattr__(self, "_descendants", descendants)
        object.__setattr__(self, "_ancestors", ancestors)

    # ------------------------------------------------------------------ #
    # Closure queries
    # ------------------------------------------------------------------ #

    def descendants(self, finding: FindingName | str) -> FrozenSet[FindingName]:
        return self._descendants[_finding(finding)]

    def ancestors(self, finding: FindingName | str) -> FrozenSet[FindingName]:
        return self._ancestors[_finding(finding)]

    def excluded_features(self, task: TaskName | str) -> FrozenSet[FindingName]:
        """The task's own finding plus every ancestor and descendant."""
        finding = FindingName(TaskName(task).value)
        return frozenset({finding}) | self.ancestors(finding) | self.descendants(finding)

    # ------------------------------------------------------------------ #
    # Persistence
    # ------------------------------------------------------------------ #

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[str, str]]) -> "LabelHierarchy":
        return cls(frozenset((_finding(p), _finding(c)) for p, c in edges))

    @classmethod
    def from_json(cls, path: Path | str) -> "LabelHierarchy":
        """Load ``{"edges": [[parent, child], ...]}``."""
        path = Path(path)
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as exc:
            raise HierarchyError(f"{path.name}: invalid JSON ({exc})") from exc
        edges = data.get("edges") if isinstance(data, dict) else None
        if not isinstance(edges, list):
            raise HierarchyError(f"{path.name}: expected an object with an 'edges' list")
        pairs = []
        for i, edge in enumerate(edges):
            if not (isinstance(edge, (list, tuple)) and len(edge) == 2):
                raise HierarchyError(f"{path.name}: edge {i} is not a [parent, child] pair")
            pairs.append((edge[0], edge[1]))
        hierarchy = cls.from_edges(pairs)
        logger.debug("Loaded hierarchy with %d edges from %s", len(hierarchy.edges), path)
        return hierarchy

    @classmethod
    def default(cls) -> "LabelHierarchy":
        return cls.from_json(_DEFAULT_HIERARCHY_FILE)

    def to_json_text(self) -> str:
        ordered = sorted(
            self.edges,
            key=lambda e: (_ORDER[e[0]], _ORDER[e[1]]),
        )
        payload = {"edges": [[p.value, c.value] for p, c in ordered]}
        return json.dumps(payload, indent=2) + "\n"


_ORDER = {f: i for i, f in enumerate(FindingName)}


def _finding(name: FindingName | str) -> FindingName:
    try:
        return FindingName(str(name))
    except ValueError:
        raise HierarchyError(f"unknown finding name {name!r}") from None


def excluded_features(hierarchy: LabelHierarchy, task: TaskName | str) -> FrozenSet[FindingName]:
    """Findings dropped from the design when auditing *task*."""
    return hierarchy.excluded_features(task)
