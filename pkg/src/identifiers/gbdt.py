# -*- coding: utf-8 -*-
"""
Gradient-boosted regression trees for binary targets.

Logistic loss, first-order boosting: each round fits a depth-limited tree to
the residuals ``y − σ(F)`` with exact greedy splits and adds
``learning_rate × leaf mean`` to ``F``.  The split criterion is the
variance reduction of the residuals,

    gain = S_L² / n_L + S_R² / n_R − S² / n

where ``S`` is a residual sum.  A row goes left when ``x <= threshold``;
thresholds are midpoints between consecutive distinct feature values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.special import expit, logit

from src.app.errors import LengthMismatchError

logger = logging.getLogger(__name__)

_RATE_CLIP = 1e-6
# Zero-gain splits are kept (XOR needs them); this only absorbs rounding.
_GAIN_TOLERANCE = 1e-12


class GBDTParams(BaseModel):
    """Boosting hyper-parameters."""
    n_rounds: int = Field(default=100, ge=0, description="Boosting rounds (trees).")
    learning_rate: float = Field(default=0.1, gt=0, le=1, description="Shrinkage applied to every leaf value.")
    max_depth: int = Field(default=3, ge=1, description="Maximum tree depth.")
    min_leaf: int = Field(default=5, ge=1, description="Minimum training rows per leaf.")
    subsample: float = Field(
        default=1.0,
        gt=0,
        le=1,
        description="Fraction of rows drawn (without replacement) per round; 1.0 is deterministic.",
    )


@dataclass(frozen=True)
class Tree:
    """Flat array encoding; ``feature[i] == -1`` marks a leaf."""
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=int)
        active = self.feature[node] >= 0
        while active.any():
            rows = np.flatnonzero(active)
            current = node[rows]
            go_left = X[rows, self.feature[current]] <= self.threshold[current]
            node[rows] = np.where(go_left, self.left[current], self.right[current])
            active = self.feature[node] >= 0
        return self.value[node]

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature < 0))


class _TreeBuilder:
    def __init__(self, X: np.ndarray, residual: np.ndarray, max_depth: int, min_leaf: int) -> None:
        self.X = X
        self.residual = residual
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.feature: List[int] = []
        self.threshold: List[float] = []
        self.left: List[int] = []
        self.right: List[int] = []
        self.value: List[float] = []

    def build(self, rows: np.ndarray) -> Tree:
        self._grow(rows, depth=0)
        return Tree(
            feature=np.array(self.feature, dtype=int),
            threshold=np.array(self.threshold, dtype=float),
            left=np.array(self.left, dtype=int),
            right=np.array(self.right, dtype=int),
            value=np.array(self.value, dtype=float),
        )

    def _new_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def _grow(self, rows: np.ndarray, depth: int) -> int:
        node = self._new_node()
        self.value[node] = float(self.residual[rows].mean())
        if depth >= self.max_depth or rows.size < 2 * self.min_leaf:
            return node
        split = self._best_split(rows)
        if split is None:
            return node
        feature, threshold = split
        goes_left = self.X[rows, feature] <= threshold
        self.feature[node] = feature
        self.threshold[node] = threshold
        left = self._grow(rows[goes_left], depth + 1)
        right = self._grow(rows[~goes_left], depth + 1)
        self.left[node] = left
        self.right[node] = right
        return node

    def _best_split(self, rows: np.ndarray) -> Optional[Tuple[int, float]]:
        n = rows.size
        r = self.residual[rows]
        total = r.sum()
        parent = total * total / n
        best_gain = -np.inf
        best: Optional[Tuple[int, float]] = None
        left_sizes = np.arange(1, n)
        for j in range(self.X.shape[1]):
            x = self.X[rows, j]
            order = np.argsort(x, kind="stable")
            xs = x[order]
            cumulative = np.cumsum(r[order])[:-1]
            valid = (
                (xs[:-1] < xs[1:])
                & (left_sizes >= self.min_leaf)
                & (n - left_sizes >= self.min_leaf)
            )
            if not valid.any():
                continue
            right_sums = total - cumulative
            gains = cumulative**2 / left_sizes + right_sums**2 / (n - left_sizes) - parent
            gains = np.where(valid, gains, -np.inf)
            i = int(np.argmax(gains))
            if gains[i] > best_gain:
                best_gain = float(gains[i])
                best = (j, float((xs[i] + xs[i + 1]) / 2.0))
        if best is None or best_gain < -_GAIN_TOLERANCE:
            return None
        return best


class GradientBoostedTrees:
    """A fitted ensemble; use :func:`fit_gbdt` to build one."""

    def __init__(self, base_score: float, trees: List[Tree], learning_rate: float, n_features: int) -> None:
        self.base_score = base_score
        self.trees = trees
        self.learning_rate = learning_rate
        self.n_features = n_features

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise LengthMismatchError(f"expected {self.n_features} features, got shape {X.shape}")
        raw = np.full(X.shape[0], self.base_score)
        for tree in self.trees:
            raw += self.learning_rate * tree.predict(X)
        return raw

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """P(y = 1) per row."""
        return expit(self.decision_function(X))

    def __repr__(self) -> str:
        return f"GradientBoostedTrees(n_trees={len(self.trees)}, n_features={self.n_features})"


def fit_gbdt(
    X: np.ndarray, y: np.ndarray, params: Optional[GBDTParams] = None, seed: int = 0
) -> GradientBoostedTrees:
    """Boost trees on logistic loss.  *seed* only matters when subsampling."""
    params = params or GBDTParams()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if n == 0:
        raise ValueError("cannot fit gradient-boosted trees on empty data")
    if y.shape != (n,):
        raise LengthMismatchError(f"X has {n} rows but y has shape {y.shape}")

    rate = float(np.clip(y.mean(), _RATE_CLIP, 1.0 - _RATE_CLIP))
    base = float(logit(rate))
    raw = np.full(n, base)
    rng = np.random.default_rng(seed)
    sample_size = max(1, int(round(params.subsample * n)))
    trees: List[Tree] = []
    for _ in range(params.n_rounds):
        residual = y - expit(raw)
        if sample_size < n:
            rows = np.sort(rng.choice(n, size=sample_size, replace=False))
        else:
            rows = np.arange(n)
        tree = _TreeBuilder(X, residual, params.max_depth, params.min_leaf).build(rows)
        raw += params.learning_rate * tree.predict(X)
        trees.append(tree)
    logger.debug("Boosted %d trees on %d rows x %d features", len(trees), n, X.shape[1])
    return GradientBoostedTrees(base, trees, params.learning_rate, X.shape[1])
