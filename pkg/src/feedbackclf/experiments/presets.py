"""Best-performing configurations per dataset and class, as shipped presets."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..corpus import LabelClass, Language, Source

LING = ("n_words", "n_stopwords", "tense", "pos")

DATASETS = {
    "app_review_EN": (Source.APP_REVIEW, Language.EN),
    "tweet_EN": (Source.TWEET, Language.EN),
    "tweet_IT": (Source.TWEET, Language.IT),
}


@dataclass(frozen=True)
class Preset:
    name: str
    approach: str  # "traditional" or "deep"
    dataset: str
    positive: LabelClass
    algorithm: str
    params: dict = field(hash=False)
    features: tuple = ()
    sampling: bool = True
    scaling: bool = False

    @property
    def language(self) -> Language:
        return DATASETS[self.dataset][1]

    @property
    def source(self) -> Source:
        return DATASETS[self.dataset][0]

    def to_dict(self) -> dict:
        return {"name": self.name, "approach": self.approach, "dataset": self.dataset,
                "positive": self.positive.value, "algorithm": self.algorithm, "params": dict(self.params),
                "features": list(self.features), "sampling": self.sampling, "scaling": self.scaling}


def _dt(criterion, max_depth, leaf, split, splitter):
    return {"criterion": criterion, "max_depth": max_depth, "min_samples_leaf": leaf,
            "min_samples_split": split, "splitter": splitter}


def _rf(max_features, n_estimators):
    return {"max_features": max_features, "n_estimators": n_estimators}


def _cnn(dense_units, kernel_size, number_filters=16):
    return {"dense_units": dense_units, "kernel_size": kernel_size, "number_filters": number_filters}


_PR, _IN, _IR = LabelClass.PROBLEM_REPORT, LabelClass.INQUIRY, LabelClass.IRRELEVANT

_TRADITIONAL = [
    ("app_review_EN", _PR, "random_forest", _rf(None, 500), ("sentiment", "tfidf"), True, False),
    ("app_review_EN", _IN, "decision_tree", _dt("gini", 1, 1, 4, "random"), ("tfidf", "keywords"), False, False),
    ("app_review_EN", _IR, "decision_tree", _dt("gini", 8, 2, 4, "random"), LING + ("keywords", "tfidf"),
     False, False),
    ("tweet_EN", _PR, "random_forest", _rf("auto", 1000), ("sentiment", "tfidf"), True, True),
    ("tweet_EN", _IN, "decision_tree", _dt("gini", 1, 1, 2, "best"), LING + ("keywords", "tfidf", "fasttext"),
     True, True),
    ("tweet_EN", _IR, "random_forest", _rf(None, 1000), LING + ("keywords", "fasttext"), True, False),
    ("tweet_IT", _PR, "random_forest", _rf("log2", 1000), ("sentiment",) + LING + ("tfidf",), True, True),
    ("tweet_IT", _IN, "decision_tree", _dt("entropy", 8, 10, 6, "random"), LING + ("keywords",), True, False),
    ("tweet_IT", _IR, "decision_tree", _dt("entropy", 8, 8, 2, "random"), ("sentiment",) + LING + ("tfidf", "keywords"),
     False, True),
]

_DEEP = [
    ("app_review_EN", _PR, _cnn(32, 3)),
    ("app_review_EN", _IN, _cnn(32, 5)),
    ("app_review_EN", _IR, _cnn(32, 5)),
    ("tweet_EN", _PR, _cnn(32, 5)),
    ("tweet_EN", _IN, _cnn(16, 5)),
    ("tweet_EN", _IR, _cnn(32, 5)),
    ("tweet_IT", _PR, _cnn(32, 5)),
    ("tweet_IT", _IN, _cnn(32, 5)),
    ("tweet_IT", _IR, _cnn(32, 5)),
]


def _build() -> dict:
    from ..features import normalize_spec

    out = {}
    for ds, cls, algo, params, feats, sampling, scaling in _TRADITIONAL:
        name = f"trad/{ds}/{cls.value}"
        out[name] = Preset(name, "traditional", ds, cls, algo, params, normalize_spec(feats), sampling, scaling)
    for ds, cls, params in _DEEP:
        name = f"dl/{ds}/{cls.value}"
        out[name] = Preset(name, "deep", ds, cls, "cnn", params, (), True, True)
    return out


PRESETS = _build()


def list_presets() -> list[str]:
    return sorted(PRESETS)


def load_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available presets: {', '.join(list_presets())}") from None
