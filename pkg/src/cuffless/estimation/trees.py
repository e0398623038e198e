"""Regression trees and AdaBoost.R2 on numpy arrays.

Trees are stored as flat node arrays so that a fitted model serializes to
plain lists.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray

from ..exceptions import BaselineTrainingError

FloatArray = NDArray[np.float64]

logger = logging.getLogger("cuffless.estimation")

_LEAF = -1


@dataclass
class RegressionTree:
    """CART regression tree with variance-reduction splits.

    Args:
        max_depth: Maximum depth; a depth-0 tree is a single leaf.
        min_leaf: Minimum number of training rows per leaf.
    """

    max_depth: int = 6
    min_leaf: int = 5
    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    value: list[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.max_depth < 0:
            raise BaselineTrainingError(f"max_depth must be >= 0, got {self.max_depth}.")
        if self.min_leaf < 1:
            raise BaselineTrainingError(f"min_leaf must be >= 1, got {self.min_leaf}.")

    @property
    def n_nodes(self) -> int:
        return len(self.value)

    def fit(self, x: FloatArray, y: FloatArray) -> RegressionTree:
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.shape[0] or y.size == 0:
            raise BaselineTrainingError(
                f"Tree inputs have incompatible shapes {x.shape} and {y.shape}."
            )
        self.feature, self.threshold, self.left, self.right, self.value = [], [], [], [], []
        self._grow(x, y, np.arange(y.size), depth=0)
        return self

    def _new_node(self, value: float) -> int:
        self.feature.append(_LEAF)
        self.threshold.append(0.0)
        self.left.append(_LEAF)
        self.right.append(_LEAF)
        self.value.append(value)
        return len(self.value) - 1

    def _grow(self, x: FloatArray, y: FloatArray, rows: NDArray[np.intp], depth: int) -> int:
        node = self._new_node(float(np.mean(y[rows])))
        if depth >= self.max_depth or rows.size < 2 * self.min_leaf:
            return node
        split = _best_split(x[rows], y[rows], self.min_leaf)
        if split is None:
            return node
        feature, threshold = split
        goes_left = x[rows, feature] <= threshold
        self.feature[node] = feature
        self.threshold[node] = threshold
        self.left[node] = self._grow(x, y, rows[goes_left], depth + 1)
        self.right[node] = self._grow(x, y, rows[~goes_left], depth + 1)
        return node

    def predict(self, x: FloatArray) -> FloatArray:
        if not self.value:
            raise BaselineTrainingError("Tree is not fitted.")
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        out = np.empty(x.shape[0])
        for i, row in enumerate(x):
            node = 0
            while self.feature[node] != _LEAF:
                f = self.feature[node]
                node = self.left[node] if row[f] <= self.threshold[node] else self.right[node]
            out[i] = self.value[node]
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "feature": list(self.feature),
            "threshold": list(self.threshold),
            "left": list(self.left),
            "right": list(self.right),
            "value": list(self.value),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RegressionTree:
        return cls(
            max_depth=int(data["max_depth"]),
            min_leaf=int(data["min_leaf"]),
            feature=[int(v) for v in data["feature"]],
            threshold=[float(v) for v in data["threshold"]],
            left=[int(v) for v in data["left"]],
            right=[int(v) for v in data["right"]],
            value=[float(v) for v in data["value"]],
        )


def _best_split(x: FloatArray, y: FloatArray, min_leaf: int) -> tuple[int, float] | None:
    """Feature and threshold minimizing the children's summed squared error."""
    n = y.size
    best: tuple[float, int, float] | None = None
    parent_sse = float(np.sum((y - y.mean()) ** 2))
    if parent_sse <= 1e-12 * (1.0 + float(np.sum(y * y))):
        return None
    # Candidate split positions: after row i (0-based) in sorted order.
    positions = np.arange(min_leaf - 1, n - min_leaf)
    if positions.size == 0:
        return None
    for f in range(x.shape[1]):
        order = np.argsort(x[:, f], kind="stable")
        xs, ys = x[order, f], y[order]
        valid = positions[xs[positions] < xs[positions + 1]]
        if valid.size == 0:
            continue
        csum = np.cumsum(ys)
        csq = np.cumsum(ys * ys)
        n_left = valid + 1.0
        n_right = n - n_left
        sum_left, sq_left = csum[valid], csq[valid]
        sum_right, sq_right = csum[-1] - sum_left, csq[-1] - sq_left
        sse = (sq_left - sum_left**2 / n_left) + (sq_right - sum_right**2 / n_right)
        i = int(np.argmin(sse))
        if best is None or sse[i] < best[0]:
            pos = int(valid[i])
            best = (float(sse[i]), f, float((xs[pos] + xs[pos + 1]) / 2.0))
    if best is None or not best[0] < parent_sse:
        return None
    return best[1], best[2]


def weighted_median(values: FloatArray, weights: FloatArray) -> float:
    """Lowest value whose cumulative weight reaches half the total."""
    order = np.argsort(values, kind="stable")
    cumulative = np.cumsum(weights[order])
    idx = int(np.searchsorted(cumulative, 0.5 * cumulative[-1], side="left"))
    return float(values[order][min(idx, values.size - 1)])


@dataclass
class AdaBoostR2:
    """AdaBoost.R2 with linear loss over shallow regression trees.

    Each round fits a tree to a weighted bootstrap sample, scores the linear
    loss |error| / max |error| on the full training set and reweights rows by
    beta ** (1 - loss). Predictions are the weighted median of the trees.

    Boosting stops early when a round's weighted average loss reaches 0.5 or
    when adding its tree would raise the ensemble's mean absolute training
    error; that tree is discarded. `ensemble_losses` therefore never increases.

    Args:
        n_rounds: Maximum boosting rounds.
        max_depth: Depth of each tree.
        min_leaf: Minimum rows per leaf of each tree.
        seed: Seed of the bootstrap sampler.
    """

    n_rounds: int = 50
    max_depth: int = 3
    min_leaf: int = 5
    seed: int = 0
    trees: list[RegressionTree] = field(default_factory=list)
    tree_weights: list[float] = field(default_factory=list)
    ensemble_losses: list[float] = field(default_factory=list)

    def fit(self, x: FloatArray, y: FloatArray) -> AdaBoostR2:
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        n = y.size
        if n == 0:
            raise BaselineTrainingError("AdaBoost needs at least one training row.")
        rng = np.random.default_rng(self.seed)
        weights = np.full(n, 1.0 / n)
        self.trees, self.tree_weights, self.ensemble_losses = [], [], []
        predictions: list[FloatArray] = []

        for _ in range(self.n_rounds):
            sample = rng.choice(n, size=n, replace=True, p=weights)
            tree = RegressionTree(max_depth=self.max_depth, min_leaf=self.min_leaf)
            tree.fit(x[sample], y[sample])
            pred = tree.predict(x)
            error = np.abs(pred - y)
            largest = float(error.max())
            if largest == 0.0:
                self._add(tree, 1.0, pred, predictions, y)
                break
            loss = error / largest
            average = float(np.sum(weights * loss))
            if average >= 0.5:
                if not self.trees:
                    self._add(tree, 1.0, pred, predictions, y)
                break
            beta = average / (1.0 - average)
            if not self._add(tree, math.log(1.0 / beta), pred, predictions, y):
                break
            weights = weights * np.power(beta, 1.0 - loss)
            weights /= weights.sum()
        logger.debug(
            f"AdaBoost kept {len(self.trees)} of {self.n_rounds} rounds, "
            f"training MAE {self.ensemble_losses[-1]:.3f}"
        )
        return self

    def _add(
        self,
        tree: RegressionTree,
        weight: float,
        pred: FloatArray,
        predictions: list[FloatArray],
        y: FloatArray,
    ) -> bool:
        """Append `tree` unless it raises the ensemble's training error."""
        stacked = np.vstack([*predictions, pred])
        ensemble = self._median(stacked, np.asarray([*self.tree_weights, weight]))
        mae = float(np.mean(np.abs(ensemble - y)))
        if self.ensemble_losses and mae > self.ensemble_losses[-1]:
            return False
        self.trees.append(tree)
        self.tree_weights.append(weight)
        self.ensemble_losses.append(mae)
        predictions.append(pred)
        return True

    @staticmethod
    def _median(stacked: FloatArray, tree_weights: FloatArray) -> FloatArray:
        return np.array(
            [weighted_median(stacked[:, j], tree_weights) for j in range(stacked.shape[1])]
        )

    def predict(self, x: FloatArray) -> FloatArray:
        if not self.trees:
            raise BaselineTrainingError("AdaBoost model is not fitted.")
        stacked = np.vstack([tree.predict(x) for tree in self.trees])
        return self._median(stacked, np.asarray(self.tree_weights))

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_rounds": self.n_rounds,
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "seed": self.seed,
            "tree_weights": list(self.tree_weights),
            "trees": [tree.to_dict() for tree in self.trees],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AdaBoostR2:
        return cls(
            n_rounds=int(data["n_rounds"]),
            max_depth=int(data["max_depth"]),
            min_leaf=int(data["min_leaf"]),
            seed=int(data["seed"]),
            trees=[RegressionTree.from_dict(t) for t in data["trees"]],
            tree_weights=[float(w) for w in data["tree_weights"]],
        )
