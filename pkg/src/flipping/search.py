# -*- coding: utf-8 -*-
"""
Top-k flipping search over train / validation / test folds.

For each candidate k the flipping threshold is the midpoint between the
k-th highest train-fold likelihood and the next lower one, so that
"likelihood above the threshold" selects the top k together with anything
tied with the k-th.  The rule is checked on the train-fold sub-matrices of
exactly that set; when it holds, the validation fold is flipped at the same
threshold and its F1 improvement recorded.  The k with the largest strictly
positive validation improvement (smallest k on ties) is then applied to the
test fold, whose F1 change is bootstrapped.

"Higher than the threshold" is strict everywhere.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.app.errors import FlipSearchError, LengthMismatchError
from src.config.constants import DEFAULT_BOOTSTRAP_RESAMPLES
from src.flipping.matrices import FlipSubMatrices, flipping_rule, masked_sub_matrices
from src.metrics.bootstrap import BootstrapCI, bootstrap_ci
from src.metrics.classification import f1, f1_value, misclass_ground_truth

logger = logging.getLogger(__name__)


def apply_flip(
    predictions: Sequence[int] | np.ndarray,
    likelihoods: Sequence[float] | np.ndarray,
    flipping_threshold: float,
) -> np.ndarray:
    """Negate every prediction whose likelihood is strictly above the threshold."""
    pred = np.asarray(predictions, dtype=int)
    lik = np.asarray(likelihoods, dtype=float)
    if pred.shape != lik.shape:
        raise LengthMismatchError(f"length mismatch: {pred.shape} vs {lik.shape}")
    return np.where(lik > flipping_threshold, 1 - pred, pred)


def flipping_threshold(likelihoods: Sequence[float] | np.ndarray, k: int) -> float:
    """Cut-point whose strict exceedances are the top *k* likelihoods plus any ties.

    The midpoint between the k-th highest value and the next lower one,
    ``-inf`` when nothing lies below it and ``+inf`` for k = 0.
    """
    values = np.asarray(likelihoods, dtype=float)
    if not 0 <= k <= values.size:
        raise FlipSearchError(f"k must lie in [0, {values.size}], got {k}")
    if k == 0:
        return math.inf
    kth = np.sort(values)[::-1][k - 1]
    below = values[values < kth]
    if not below.size:
        return -math.inf
    lower = below.max()
    mid = (kth + lower) / 2
    # adjacent doubles can round the midpoint up onto kth
    return float(mid if mid < kth else lower)


def default_k_grid(n_train: int) -> Tuple[int, ...]:
    """Dense small k up to a tenth of the fold, plus an eighth and a quarter."""
    if n_train <= 0:
        return ()
    grid = set(range(1, math.ceil(n_train / 10) + 1))
    grid.update({math.ceil(n_train / 8), math.ceil(n_train / 4)})
    return tuple(sorted(k for k in grid if k <= n_train))


@dataclass(frozen=True)
class FlipFold:
    """Thresholded predictions, labels and identifier likelihoods of one fold."""
    predictions: np.ndarray
    labels: np.ndarray
    likelihoods: np.ndarray
    study_ids: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "predictions", np.asarray(self.predictions, dtype=int))
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=int))
        object.__setattr__(self, "likelihoods", np.asarray(self.likelihoods, dtype=float))
        n = self.labels.size
        if self.predictions.shape != (n,) or self.likelihoods.shape != (n,):
            raise LengthMismatchError(
                f"fold arrays differ in length: predictions {self.predictions.shape}, "
                f"labels {self.labels.shape}, likelihoods {self.likelihoods.shape}"
            )
        if not self.study_ids:
            object.__setattr__(self, "study_ids", tuple(str(i) for i in range(n)))
        elif len(self.study_ids) != n:
            raise LengthMismatchError(f"{len(self.study_ids)} study ids for {n} studies")

    def __len__(self) -> int:
        return int(self.labels.size)

    @property
    def misclassified(self) -> np.ndarray:
        return misclass_ground_truth(self.predictions, self.labels)


@dataclass(frozen=True)
class KTrial:
    """What the search saw for one k."""
    k: int
    threshold: float
    rule: bool
    val_improvement: float
    n_flipped: int


@dataclass(frozen=True)
class FlipDecision:
    """*k* counts the train studies above the threshold, ties with the k-th included."""
    flip: bool
    k: int
    flipping_threshold: float
    top_k_precision: float


@dataclass(frozen=True)
class FlipOutcome:
    decision: FlipDecision
    f1_before: float
    f1_after: float
    f1_change: float
    f1_change_ci: BootstrapCI
    flipped_study_ids: Tuple[str, ...]
    train_matrices: FlipSubMatrices
    trials: Tuple[KTrial, ...] = field(default=(), repr=False)


def _train_matrices(fold: FlipFold, threshold: float) -> FlipSubMatrices:
    # same predicate apply_flip uses, so ties at the cut are counted as flipped
    flipped = fold.likelihoods > threshold
    return masked_sub_matrices(fold.predictions, fold.labels, fold.misclassified, flipped)


def flip_search(
    train: FlipFold,
    val: FlipFold,
    test: FlipFold,
    k_grid: Optional[Iterable[int]] = None,
    seed: int = 0,
    n_resamples: int = DEFAULT_BOOTSTRAP_RESAMPLES,
    workers: int = 1,
) -> FlipOutcome:
    """Choose k on train/val and report the test-fold F1 change of flipping."""
    grid = sorted(set(default_k_grid(len(train)) if k_grid is None else (int(k) for k in k_grid)))
    if not grid:
        raise FlipSearchError("k grid is empty")
    if grid[0] < 0 or grid[-1] > len(train):
        raise FlipSearchError(f"k grid {grid[0]}..{grid[-1]} outside [0, {len(train)}]")

    val_before = f1(val.predictions, val.labels).f1
    best_improvement = 0.0
    best_flip = False
    best_k = 0
    best_threshold = math.inf
    trials: List[KTrial] = []
    for k in grid:
        threshold = flipping_threshold(train.likelihoods, k)
        matrices = _train_matrices(train, threshold)
        rule = flipping_rule(matrices)
        improvement = 0.0
        if rule:
            flipped = apply_flip(val.predictions, val.likelihoods, threshold)
            improvement = f1(flipped, val.labels).f1 - val_before
        trials.append(KTrial(k, threshold, rule, improvement, matrices.k))
        if improvement > best_improvement:
            best_improvement = improvement
            best_flip = True
            best_k = k
            best_threshold = threshold

    chosen = _train_matrices(train, best_threshold)
    decision = FlipDecision(
        flip=best_flip,
        k=chosen.k,
        flipping_threshold=best_threshold,
        top_k_precision=chosen.top_k_precision,
    )

    before = test.predictions
    f1_before = f1(before, test.labels).f1
    if not best_flip:
        logger.debug("No k improved validation F1; test fold left unflipped")
        return FlipOutcome(
            decision=decision,
            f1_before=f1_before,
            f1_after=f1_before,
            f1_change=0.0,
            f1_change_ci=BootstrapCI.constant(0.0, n_resamples, seed),
            flipped_study_ids=(),
            train_matrices=chosen,
            trials=tuple(trials),
        )

    after = apply_flip(before, test.likelihoods, best_threshold)
    labels = test.labels
    f1_after = f1(after, labels).f1
    ci = bootstrap_ci(
        lambda idx: f1_value(after[idx], labels[idx]) - f1_value(before[idx], labels[idx]),
        n=len(test),
        n_resamples=n_resamples,
        seed=seed,
        workers=workers,
    )
    flipped_ids = tuple(sid for sid, hit in zip(test.study_ids, test.likelihoods > best_threshold) if hit)
    logger.debug(
        "Flip chosen at k=%d (val +%.4f); test F1 %.4f -> %.4f, %d studies flipped",
        best_k, best_improvement, f1_before, f1_after, len(flipped_ids),
    )
    return FlipOutcome(
        decision=decision,
        f1_before=f1_before,
        f1_after=f1_after,
        f1_change=f1_after - f1_before,
        f1_change_ci=ci,
        flipped_study_ids=flipped_ids,
        train_matrices=chosen,
        trials=tuple(trials),
    )
