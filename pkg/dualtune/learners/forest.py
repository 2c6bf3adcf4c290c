"""Random forest of entropy-split decision trees."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..utils.math_helpers import binary_entropy
from ..utils.seeding import spawn_seeds
from .base import Model

LEAF = -1
MIN_GAIN = 1e-12


@dataclass(frozen=True)
class TreeParams:
    max_depth: Optional[int] = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1
    max_leaf_nodes: Optional[int] = None
    max_features: Union[float, str] = "auto"


@dataclass(frozen=True, eq=False)
class Tree:
    """Array-encoded binary tree; rows with x[feature] <= threshold go left."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    label: np.ndarray

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature == LEAF))

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf node id reached by each row."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[node] != LEAF
        while active.any():
            rows = np.flatnonzero(active)
            cur = node[rows]
            go_left = X[rows, self.feature[cur]] <= self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[node] != LEAF
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.label[self.apply(X)]


def features_per_split(max_features: Union[float, str, None], n_features: int) -> int:
    if max_features is None or max_features == "auto":
        return max(1, int(math.sqrt(n_features)))
    return min(n_features, max(1, math.ceil(float(max_features) * n_features)))


def best_split(
    X: np.ndarray, y: np.ndarray, features: np.ndarray, min_samples_leaf: int
) -> Optional[tuple[float, int, float]]:
    """(gain, feature, threshold) maximising information gain, or None.

    Thresholds sit midway between consecutive distinct values. Ties go to
    the earlier feature in ``features`` and then the lower threshold.
    """
    n = y.shape[0]
    parent = float(binary_entropy(y.mean()))
    Xf = X[:, features]
    order = np.argsort(Xf, axis=0, kind="stable")
    xs = np.take_along_axis(Xf, order, axis=0)
    ys = y[order]
    left_n = np.arange(1, n)[:, None].astype(float)
    left_pos = np.cumsum(ys, axis=0)[:-1]
    right_n = n - left_n
    right_pos = ys.sum(axis=0)[None, :] - left_pos
    child = (
        left_n * binary_entropy(left_pos / left_n)
        + right_n * binary_entropy(right_pos / right_n)
    ) / n
    gain = parent - child
    valid = (
        (xs[1:] > xs[:-1])
        & (left_n >= min_samples_leaf)
        & (right_n >= min_samples_leaf)
    )
    gain = np.where(valid, gain, -np.inf)
    if not np.isfinite(gain).any():
        return None
    # Feature-major scan so ties resolve to the earlier feature, then lower threshold
    flat = gain.T.ravel()
    k = int(np.argmax(flat))
    j, i = divmod(k, n - 1)
    if flat[k] <= MIN_GAIN:
        return None
    threshold = 0.5 * (xs[i, j] + xs[i + 1, j])
    return float(flat[k]), int(features[j]), float(threshold)


def majority(y: np.ndarray) -> int:
    # Ties vote 0
    return int(2 * y.sum() > y.shape[0])


def build_tree(
    X: np.ndarray, y: np.ndarray, params: TreeParams, rng: np.random.Generator
) -> Tree:
    """Grow one tree best-first; with max_leaf_nodes unset every splittable node expands."""
    n_features = X.shape[1]
    m_try = features_per_split(params.max_features, n_features)
    max_depth = params.max_depth if params.max_depth is not None else np.inf
    max_leaves = params.max_leaf_nodes if params.max_leaf_nodes is not None else np.inf

    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    label: list[int] = []

    def new_node(idx: np.ndarray) -> int:
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        label.append(majority(y[idx]))
        return len(feature) - 1

    def candidate(node: int, idx: np.ndarray, depth: int):
        yi = y[idx]
        if (
            depth >= max_depth
            or idx.shape[0] < params.min_samples_split
            or yi.min() == yi.max()
        ):
            return None
        feats = np.sort(rng.choice(n_features, size=m_try, replace=False))
        found = best_split(X[idx], yi, feats, params.min_samples_leaf)
        if found is None:
            return None
        gain, f, t = found
        return (-gain, node, f, t, idx, depth)

    # Entries are (-gain, node, ...); node ids are unique so arrays are never compared
    heap: list = []
    root_idx = np.arange(X.shape[0])
    root = new_node(root_idx)
    leaves = 1
    first = candidate(root, root_idx, 0)
    if first is not None:
        heapq.heappush(heap, first)
    while heap and leaves < max_leaves:
        _, node, f, t, idx, depth = heapq.heappop(heap)
        go_left = X[idx, f] <= t
        li, ri = idx[go_left], idx[~go_left]
        feature[node], threshold[node] = f, t
        left[node], right[node] = new_node(li), new_node(ri)
        leaves += 1
        for child, cidx in ((left[node], li), (right[node], ri)):
            cand = candidate(child, cidx, depth + 1)
            if cand is not None:
                heapq.heappush(heap, cand)

    return Tree(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=float),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        label=np.array(label, dtype=np.int64),
    )


@dataclass(frozen=True, eq=False)
class ForestModel(Model):
    trees: tuple[Tree, ...] = ()

    def _score(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros(X.shape[0])
        for tree in self.trees:
            votes += tree.predict(X)
        return votes / len(self.trees)


def train_forest(X: np.ndarray, y: np.ndarray, seed: int, **params) -> ForestModel:
    n_estimators = int(params.pop("n_estimators", 10))
    tree_params = TreeParams(**params)
    n = X.shape[0]
    trees = []
    for tree_seed in spawn_seeds(seed, n_estimators):
        rng = np.random.default_rng(tree_seed)
        sample = rng.integers(0, n, size=n)
        trees.append(build_tree(X[sample], y[sample], tree_params, rng))
    return ForestModel(kind="RF", n_features=X.shape[1], seed=seed, trees=tuple(trees))
