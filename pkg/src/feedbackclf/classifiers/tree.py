"""Binary CART decision tree with gini/entropy criteria and best/random splitters."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np


@dataclass(frozen=True)
class DtParams:
    criterion: str = "gini"
    max_depth: int | None = None
    min_samples_leaf: int = 1
    min_samples_split: int = 2
    splitter: str = "best"
    max_features: str | int | None = None

    def __post_init__(self):
        if self.criterion not in ("gini", "entropy"):
            raise ValueError(f"criterion must be gini or entropy, got {self.criterion!r}")
        if self.splitter not in ("best", "random"):
            raise ValueError(f"splitter must be best or random, got {self.splitter!r}")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be >= 1 or None")

    def to_dict(self) -> dict:
        return asdict(self)


def resolve_max_features(max_features, n_features: int) -> int:
    """Number of candidate features per split: ``auto``/``sqrt`` -> sqrt(d),
    ``log2`` -> log2(d), ``None``/``none`` -> d, an int -> itself."""
    if max_features is None or (isinstance(max_features, str) and max_features.lower() == "none"):
        return n_features
    if isinstance(max_features, str):
        key = max_features.lower()
        if key in ("auto", "sqrt"):
            return max(1, int(math.sqrt(n_features)))
        if key == "log2":
            return max(1, int(math.log2(n_features))) if n_features > 1 else 1
        raise ValueError(f"unknown max_features {max_features!r}")
    if isinstance(max_features, float):
        return max(1, int(max_features * n_features))
    return max(1, min(int(max_features), n_features))


def _impurity(pos, n, criterion):
    p = np.divide(pos, n, out=np.zeros_like(pos, dtype=float), where=n > 0)
    if criterion == "gini":
        return 2.0 * p * (1.0 - p)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = 1.0 - p
        h = -(np.where(p > 0, p * np.log2(p), 0.0) + np.where(q > 0, q * np.log2(q), 0.0))
    return h


class DecisionTree:
    """Tree stored as flat arrays; rows go left when ``x[feature] <= threshold``.

    ``value`` holds the positive-class fraction of each node's training rows.
    """

    def __init__(self, params: DtParams = DtParams()):
        self.params = params
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.value = []
        self.n_samples = []

    # -- fitting ---------------------------------------------------------
    def fit(self, X, y, rng: np.random.Generator):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        self.n_features = X.shape[1]
        self._k = resolve_max_features(self.params.max_features, self.n_features)
        self._X, self._y, self._rng = X, y, rng
        self._grow(np.arange(len(y)), 0)
        del self._X, self._y, self._rng
        self._freeze()
        return self

    def _new_node(self, idx) -> int:
        pos = int(self._y[idx].sum())
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(pos / len(idx))
        self.n_samples.append(len(idx))
        return len(self.feature) - 1

    def _grow(self, idx, depth):
        # explicit stack, left child first: same node order and RNG use as recursion
        stack = [(idx, depth, -1, False)]
        p = self.params
        while stack:
            idx, depth, parent, is_right = stack.pop()
            node = self._new_node(idx)
            if parent >= 0:
                if is_right:
                    self.right[parent] = node
                else:
                    self.left[parent] = node
            n = len(idx)
            pos = self.value[node] * n
            if (pos == 0 or pos == n
                    or (p.max_depth is not None and depth >= p.max_depth)
                    or n < p.min_samples_split
                    or n < 2 * p.min_samples_leaf):
                continue
            split = self._best_split(idx)
            if split is None:
                continue
            f, thr = split
            go_left = self._X[idx, f] <= thr
            self.feature[node] = f
            self.threshold[node] = thr
            stack.append((idx[~go_left], depth + 1, node, True))
            stack.append((idx[go_left], depth + 1, node, False))

    def _best_split(self, idx):
        p = self.params
        d = self.n_features
        feats = np.arange(d) if self._k >= d else np.sort(self._rng.choice(d, self._k, replace=False))
        Xs = self._X[np.ix_(idx, feats)]
        ys = self._y[idx]
        n = len(idx)
        order = np.argsort(Xs, axis=0, kind="stable")
        xs = np.take_along_axis(Xs, order, axis=0)
        ysorted = ys[order]
        left_pos = np.cumsum(ysorted, axis=0)[:-1]
        n_left = np.arange(1, n)[:, None].astype(float)
        n_right = n - n_left
        total_pos = ys.sum()
        valid = (xs[1:] > xs[:-1]) & (n_left >= p.min_samples_leaf) & (n_right >= p.min_samples_leaf)
        if not valid.any():
            return None
        cost = (n_left * _impurity(left_pos, n_left, p.criterion)
                + n_right * _impurity(total_pos - left_pos, n_right, p.criterion)) / n
        cost = np.where(valid, cost, np.inf)
        if p.splitter == "random":
            # one random candidate per feature, then the best among those
            picked = np.full(cost.shape[1], np.inf)
            pos_of = np.zeros(cost.shape[1], dtype=np.int64)
            for j in range(cost.shape[1]):
                cand = np.flatnonzero(valid[:, j])
                if len(cand):
                    i = cand[self._rng.integers(len(cand))]
                    picked[j], pos_of[j] = cost[i, j], i
            j = int(np.argmin(picked))
            i = int(pos_of[j])
        else:
            # column-major argmin: lowest feature index wins ties, then lowest threshold
            flat = int(np.argmin(cost.T))
            j, i = divmod(flat, cost.shape[0])
        lo, hi = xs[i, j], xs[i + 1, j]
        thr = (lo + hi) / 2.0
        if not lo <= thr < hi:
            thr = lo
        return int(feats[j]), float(thr)

    def _freeze(self):
        self.feature = np.asarray(self.feature, dtype=np.int64)
        self.threshold = np.asarray(self.threshold, dtype=float)
        self.left = np.asarray(self.left, dtype=np.int64)
        self.right = np.asarray(self.right, dtype=np.int64)
        self.value = np.asarray(self.value, dtype=float)
        self.n_samples = np.asarray(self.n_samples, dtype=np.int64)

    # -- inference -------------------------------------------------------
    def apply(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        nodes = np.zeros(len(X), dtype=np.int64)
        active = self.feature[nodes] >= 0
        while active.any():
            rows = np.flatnonzero(active)
            cur = nodes[rows]
            go_left = X[rows, self.feature[cur]] <= self.threshold[cur]
            nodes[rows] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[nodes] >= 0
        return nodes

    def predict_proba(self, X) -> np.ndarray:
        return self.value[self.apply(X)]

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature < 0))

    @property
    def depth(self) -> int:
        best, stack = 0, [(0, 0)]
        while stack:
            i, d = stack.pop()
            if self.feature[i] < 0:
                best = max(best, d)
            else:
                stack.extend([(self.left[i], d + 1), (self.right[i], d + 1)])
        return best

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "n_features": self.n_features,
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
            "n_samples": self.n_samples.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DecisionTree":
        t = cls(DtParams(**d["params"]))
        t.n_features = d["n_features"]
        for key in ("feature", "threshold", "left", "right", "value", "n_samples"):
            setattr(t, key, d[key])
        t._freeze()
        return t
