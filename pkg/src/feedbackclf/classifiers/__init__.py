"""Classical binary learners behind one fit/predict interface."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from ..corpus import LabelClass
from .forest import RandomForest, RfParams, tree_rng
from .naive_bayes import GaussianNB, NbParams
from .svm import LinearSVM, SvmParams
from .tree import DecisionTree, DtParams, resolve_max_features

ALGORITHMS = ("naive_bayes", "decision_tree", "random_forest", "linear_svm")

_PARAM_TYPES = {
    "naive_bayes": NbParams,
    "decision_tree": DtParams,
    "random_forest": RfParams,
    "linear_svm": SvmParams,
}
_MODEL_TYPES = {
    "naive_bayes": GaussianNB,
    "decision_tree": DecisionTree,
    "random_forest": RandomForest,
    "linear_svm": LinearSVM,
}
_ALIASES = {"nb": "naive_bayes", "dt": "decision_tree", "rf": "random_forest", "svm": "linear_svm"}

THRESHOLD = 0.5


def normalize_algorithm(name: str) -> str:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {name!r} (known: {', '.join(ALGORITHMS)})")
    return key


def _coerce(value):
    if isinstance(value, str) and value.lower() in ("none", "null"):
        return None
    return value


def make_params(algorithm: str, params: dict | None = None):
    """Build the typed hyperparameter object; unknown keys are rejected."""
    algorithm = normalize_algorithm(algorithm)
    cls = _PARAM_TYPES[algorithm]
    params = dict(params or {})
    known = {f.name for f in fields(cls)}
    extra = set(params) - known
    if extra:
        raise ValueError(f"unknown {algorithm} hyperparameter(s): {', '.join(sorted(extra))}")
    return cls(**{k: _coerce(v) for k, v in params.items()})


@dataclass(frozen=True)
class TrainedClassifier:
    algorithm: str
    hyperparams: object
    model: object
    feature_dimension: int
    seed: int
    positive_class: LabelClass | None = None

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "hyperparams": self.hyperparams.to_dict(),
            "feature_dimension": self.feature_dimension,
            "seed": self.seed,
            "positive_class": self.positive_class.value if self.positive_class else None,
            "state": self.model.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainedClassifier":
        algorithm = normalize_algorithm(d["algorithm"])
        model = _MODEL_TYPES[algorithm].from_dict(d["state"])
        pc = d.get("positive_class")
        return cls(algorithm, make_params(algorithm, d["hyperparams"]), model, int(d["feature_dimension"]),
                   int(d["seed"]), LabelClass(pc) if pc else None)


def fit(algorithm: str, params, X, y, seed: int = 42, positive_class=None) -> TrainedClassifier:
    """Fit one binary learner; ``y`` holds 0/1 labels, 1 being the positive class."""
    algorithm = normalize_algorithm(algorithm)
    if not hasattr(params, "to_dict"):
        params = make_params(algorithm, params)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2 or len(X) != len(y) or len(y) == 0:
        raise ValueError(f"X must be (n, d) with n = len(y) > 0, got X{X.shape} and {len(y)} labels")
    if np.isnan(X).any():
        raise ValueError("X contains NaN")
    if not set(np.unique(y)) <= {0, 1}:
        raise ValueError("y must be binary 0/1")
    if len(np.unique(y)) < 2:
        raise ValueError("y contains a single class; both classes are required")
    y = y.astype(np.int64)
    if algorithm == "naive_bayes":
        model = GaussianNB(params).fit(X, y)
    elif algorithm == "decision_tree":
        model = DecisionTree(params).fit(X, y, tree_rng(seed, 0))
    elif algorithm == "random_forest":
        model = RandomForest(params).fit(X, y, seed)
    else:
        model = LinearSVM(params).fit(X, y, seed)
    return TrainedClassifier(algorithm, params, model, X.shape[1], seed, positive_class)


def _as_matrix(m: TrainedClassifier, x) -> tuple[np.ndarray, bool]:
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != m.feature_dimension:
        raise ValueError(f"dimension mismatch: model expects {m.feature_dimension} features, got {X.shape[1]}")
    return X, single


def predict_score(m: TrainedClassifier, x):
    """Positive-class score in [0, 1]: leaf fraction (DT), vote fraction (RF),
    posterior (NB), logistic of the margin (SVM)."""
    X, single = _as_matrix(m, x)
    s = m.model.predict_proba(X)
    return float(s[0]) if single else s


def predict(m: TrainedClassifier, x):
    s = predict_score(m, x)
    if np.isscalar(s):
        return int(s >= THRESHOLD)
    return (s >= THRESHOLD).astype(np.int64)


def model_complexity(algorithm: str, params) -> float:
    """Size proxy used to break ties between equally scoring configurations."""
    if algorithm == "random_forest":
        depth = params.max_depth if params.max_depth is not None else 1e6
        return float(params.n_estimators) * depth
    if algorithm == "decision_tree":
        return float(params.max_depth) if params.max_depth is not None else 1e6
    return 1.0


__all__ = [
    "ALGORITHMS", "DecisionTree", "DtParams", "GaussianNB", "LinearSVM", "NbParams", "RandomForest", "RfParams",
    "SvmParams", "THRESHOLD", "TrainedClassifier", "fit", "make_params", "model_complexity",
    "normalize_algorithm", "predict", "predict_score", "resolve_max_features", "tree_rng",
]
