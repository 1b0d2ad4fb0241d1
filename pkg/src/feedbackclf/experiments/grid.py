"""Experiment grid definition, cell enumeration, folds and derived seeds."""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from ..classifiers import make_params, model_complexity, normalize_algorithm
from ..errors import DataError
from ..features import normalize_spec

LINGUISTIC = ("n_words", "n_stopwords", "tense", "pos")

DEFAULT_FEATURE_COMBINATIONS = (
    ("sentiment",), ("n_words",), ("n_stopwords",), ("tense",), ("pos",), ("keywords",), ("tfidf",),
    ("fasttext",),
    ("sentiment", "fasttext"),
    ("n_words", "pos", "keywords", "tfidf"),
    ("sentiment", "tfidf"),
    ("keywords", "tfidf"),
    LINGUISTIC,
    LINGUISTIC + ("keywords",),
    LINGUISTIC + ("tfidf",),
    LINGUISTIC + ("keywords", "tfidf"),
    LINGUISTIC + ("keywords", "tfidf", "fasttext"),
    LINGUISTIC + ("keywords", "fasttext"),
    ("sentiment",) + LINGUISTIC + ("tfidf",),
    ("sentiment",) + LINGUISTIC + ("keywords", "tfidf"),
    ("sentiment", "keywords"),
    ("sentiment",) + LINGUISTIC,
    ("tfidf", "fasttext"),
    ("keywords", "fasttext"),
    ("sentiment", "keywords", "tfidf"),
    ("sentiment", "tfidf", "fasttext"),
    LINGUISTIC + ("fasttext",),
    ("sentiment",) + LINGUISTIC + ("keywords",),
    ("sentiment",) + LINGUISTIC + ("keywords", "fasttext"),
    ("sentiment",) + LINGUISTIC + ("keywords", "tfidf", "fasttext"),
)

DEFAULT_PARAM_GRIDS = {
    "naive_bayes": {"var_smoothing": [1e-9]},
    "decision_tree": {
        "criterion": ["gini", "entropy"],
        "max_depth": [1, 8, None],
        "min_samples_leaf": [1, 2, 8, 10],
        "min_samples_split": [2, 4, 6],
        "splitter": ["best", "random"],
    },
    "random_forest": {"n_estimators": [500, 1000], "max_features": ["auto", "log2", None]},
    "linear_svm": {"lam": [1e-4]},
}


def expand_param_grid(grid: dict) -> list[dict]:
    """Cartesian product of a ``{name: [values]}`` mapping, keys in sorted order."""
    keys = sorted(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def _fmt_value(v) -> str:
    return "None" if v is None else str(v)


def params_id(params: dict) -> str:
    return ",".join(f"{k}={_fmt_value(params[k])}" for k in sorted(params))


@dataclass(frozen=True)
class GridCell:
    features: tuple
    scaling: bool
    sampling: bool
    algorithm: str
    params: dict = field(hash=False)

    @property
    def cell_id(self) -> str:
        return (f"{self.algorithm}({params_id(self.params)})|features={'+'.join(self.features)}"
                f"|scaling={str(self.scaling).lower()}|sampling={str(self.sampling).lower()}")

    @property
    def n_groups(self) -> int:
        return len(self.features)

    def complexity(self) -> float:
        return model_complexity(self.algorithm, make_params(self.algorithm, self.params))

    def to_dict(self) -> dict:
        return {"features": list(self.features), "scaling": self.scaling, "sampling": self.sampling,
                "algorithm": self.algorithm, "params": dict(self.params)}


@dataclass(frozen=True)
class ExperimentGrid:
    feature_combinations: tuple = DEFAULT_FEATURE_COMBINATIONS
    scaling: tuple = (True, False)
    sampling: tuple = (True, False)
    algorithms: dict = field(default_factory=lambda: dict(DEFAULT_PARAM_GRIDS))
    optimization_metric: str = "f1"

    def __post_init__(self):
        combos = tuple(normalize_spec(c) for c in self.feature_combinations)
        object.__setattr__(self, "feature_combinations", combos)
        object.__setattr__(self, "scaling", tuple(bool(v) for v in self.scaling))
        object.__setattr__(self, "sampling", tuple(bool(v) for v in self.sampling))
        algos = {normalize_algorithm(a): dict(g or {}) for a, g in self.algorithms.items()}
        object.__setattr__(self, "algorithms", algos)
        if not combos or not self.scaling or not self.sampling or not algos:
            raise ValueError("every grid dimension needs at least one value")
        if self.optimization_metric != "f1":
            raise ValueError("only f1 is supported as optimization metric")
        for a, g in algos.items():
            for p in expand_param_grid(g):
                make_params(a, p)  # validates names and values

    def param_sets(self) -> list[tuple]:
        return [(a, p) for a in sorted(self.algorithms) for p in expand_param_grid(self.algorithms[a])]

    def size(self) -> int:
        return len(self.feature_combinations) * len(self.scaling) * len(self.sampling) * len(self.param_sets())

    def cells(self) -> list[GridCell]:
        return [GridCell(f, sc, sa, a, p) for f in self.feature_combinations for sc in self.scaling
                for sa in self.sampling for a, p in self.param_sets()]

    def groups_used(self) -> set:
        return {g for c in self.feature_combinations for g in c}


@dataclass(frozen=True)
class CvConfig:
    folds: int = 5
    stratified: bool = True
    seed: int | None = None  # None: use the search seed

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("folds must be >= 2")


CNN_CV = CvConfig(folds=3, stratified=True)


def cell_seed(seed: int, cell_id: str) -> int:
    """Seed for one cell, independent of evaluation order."""
    digest = hashlib.sha256(f"{seed}:{cell_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def stratified_kfold(y, folds: int, seed: int, stratified: bool = True) -> list[tuple]:
    """(train, validation) index pairs. Each class is shuffled and dealt
    round-robin, so per-fold class counts differ by at most one."""
    y = np.asarray(y)
    if len(y) < folds:
        raise DataError(f"cannot make {folds} folds from {len(y)} examples")
    rng = np.random.default_rng(seed)
    assign = np.empty(len(y), dtype=np.int64)
    if stratified:
        offset = 0
        for c in np.unique(y):
            idx = np.flatnonzero(y == c)
            idx = idx[rng.permutation(len(idx))]
            assign[idx] = (np.arange(len(idx)) + offset) % folds
            offset += len(idx)
    else:
        perm = rng.permutation(len(y))
        assign[perm] = np.arange(len(y)) % folds
    out = []
    for k in range(folds):
        out.append((np.flatnonzero(assign != k), np.flatnonzero(assign == k)))
    return out


def check_fold(y_train, y_val, fold: int):
    if len(np.unique(y_train)) < 2 or len(np.unique(y_val)) < 2:
        raise DataError(f"fold {fold} contains a single class; use stratified folds, fewer folds, "
                        "or a different seed")


def select_best(table: list[dict]) -> dict:
    """Highest mean fold-f1; ties go to fewer feature groups, then the smaller
    model, then the lexicographically smallest cell id."""
    if not table:
        raise ValueError("empty score table")
    return min(table, key=lambda r: (-r["mean_f1"], r["n_groups"], r["complexity"], r["cell_id"]))


def table_digest(table: list[dict]) -> str:
    return hashlib.sha256(json.dumps(table, sort_keys=True).encode("utf-8")).hexdigest()
