"""Random forest of CART trees with bootstrap rows and per-split feature sampling."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .tree import DecisionTree, DtParams


def tree_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream per tree so results do not depend on build order."""
    return np.random.default_rng([int(seed), int(index)])


@dataclass(frozen=True)
class RfParams:
    n_estimators: int = 100
    max_features: str | int | None = "auto"
    bootstrap: bool = True
    criterion: str = "gini"
    max_depth: int | None = None
    min_samples_leaf: int = 1
    min_samples_split: int = 2
    splitter: str = "best"

    def __post_init__(self):
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be >= 1")
        self.tree_params()  # validates the per-tree fields

    def tree_params(self) -> DtParams:
        return DtParams(self.criterion, self.max_depth, self.min_samples_leaf, self.min_samples_split,
                        self.splitter, self.max_features)

    def to_dict(self) -> dict:
        return asdict(self)


class RandomForest:
    def __init__(self, params: RfParams = RfParams()):
        self.params = params
        self.trees: list[DecisionTree] = []

    def fit(self, X, y, seed: int):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        n = len(y)
        tp = self.params.tree_params()
        self.trees = []
        for t in range(self.params.n_estimators):
            rng = tree_rng(seed, t)
            if self.params.bootstrap:
                rows = rng.integers(0, n, size=n)
                # a one-class bootstrap still yields a valid (constant) tree
                Xb, yb = X[rows], y[rows]
            else:
                Xb, yb = X, y
            self.trees.append(DecisionTree(tp).fit(Xb, yb, rng))
        return self

    def votes(self, X) -> np.ndarray:
        """Per-tree hard votes, shape (n_trees, n_rows)."""
        return np.vstack([(t.predict_proba(X) >= 0.5).astype(np.int64) for t in self.trees])

    def predict_proba(self, X) -> np.ndarray:
        return self.votes(X).mean(axis=0)

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, d: dict) -> "RandomForest":
        f = cls(RfParams(**d["params"]))
        f.trees = [DecisionTree.from_dict(t) for t in d["trees"]]
        return f
