"""Combine feature groups into one ordered vector per document."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..corpus import Language
from ..embeddings import EmbeddingTable, document_vector
from ..errors import NotFittedError
from ..textprep import ProcessedText, as_language, tagset, tenses
from . import extract
from .tfidf import TfidfModel, transform_tfidf

GROUP_ORDER = ("sentiment", "n_words", "n_stopwords", "tense", "pos", "keywords", "tfidf", "fasttext")

_ALIASES = {
    "n_tense": "tense",
    "tenses": "tense",
    "n_pos": "pos",
    "pos_tags": "pos",
    "fasttext": "fasttext",
    "embedding": "fasttext",
    "embeddings": "fasttext",
    "keyword": "keywords",
    "n_word": "n_words",
}

# groups whose values depend on a model fitted on training data
FITTED_GROUPS = frozenset({"tfidf"})


def normalize_group(name: str) -> str:
    key = name.strip().lower().replace(" ", "_").replace("-", "_")
    key = _ALIASES.get(key, key)
    if key not in GROUP_ORDER:
        raise ValueError(f"unknown feature group {name!r} (known: {', '.join(GROUP_ORDER)})")
    return key


def normalize_spec(groups) -> tuple:
    """Canonical, duplicate-free group tuple in the fixed group order."""
    if isinstance(groups, str):
        groups = [groups]
    wanted = {normalize_group(g) for g in groups}
    if not wanted:
        raise ValueError("feature spec must name at least one group")
    return tuple(g for g in GROUP_ORDER if g in wanted)


@dataclass(frozen=True)
class FeatureVector:
    names: tuple
    values: np.ndarray
    groups: dict

    def __post_init__(self):
        if len(self.names) != len(self.values):
            raise ValueError("names and values differ in length")

    def __len__(self):
        return len(self.values)

    def group(self, name: str) -> np.ndarray:
        start, stop = self.groups[name]
        return self.values[start:stop]


@dataclass
class FeatureContext:
    """Language resources plus the fitted models some groups need."""

    language: Language
    tfidf: TfidfModel | None = None
    embeddings: EmbeddingTable | None = None
    keywords: extract.KeywordList | None = None
    sentiment: extract.SentimentLexicon | None = None
    stopwords: frozenset | None = None

    def __post_init__(self):
        self.language = as_language(self.language)
        if self.keywords is None:
            self.keywords = extract.default_keywords(self.language)
        if self.sentiment is None:
            self.sentiment = extract.default_sentiment_lexicon(self.language)
        if self.stopwords is None:
            self.stopwords = extract.default_stopwords(self.language)


def group_names(group: str, ctx: FeatureContext) -> list[str]:
    if group == "sentiment":
        return ["sentiment_neg", "sentiment_pos"]
    if group in ("n_words", "n_stopwords"):
        return [group]
    if group == "tense":
        return [f"tense_{t}" for t in tenses(ctx.language)]
    if group == "pos":
        return [f"pos_{t}" for t in tagset(ctx.language)]
    if group == "keywords":
        return [f"kw_{k}" for k in ctx.keywords.keywords]
    if group == "tfidf":
        _require(group, ctx)
        return [f"tfidf_{t}" for t in ctx.tfidf.vocabulary]
    if group == "fasttext":
        _require(group, ctx)
        return [f"ft_{i}" for i in range(ctx.embeddings.dimension)]
    raise ValueError(f"unknown feature group {group!r}")


def _require(group: str, ctx: FeatureContext):
    if group == "tfidf" and ctx.tfidf is None:
        raise NotFittedError("feature group 'tfidf' needs a fitted tf-idf model")
    if group == "fasttext" and ctx.embeddings is None:
        raise NotFittedError("feature group 'fasttext' needs an embedding table")


def group_values(group: str, p: ProcessedText, ctx: FeatureContext) -> np.ndarray:
    if group == "sentiment":
        return np.array(extract.score_sentiment(p, ctx.sentiment), dtype=float)
    if group == "n_words":
        return np.array([extract.count_words(p)], dtype=float)
    if group == "n_stopwords":
        return np.array([extract.count_stopwords(p, ctx.stopwords)], dtype=float)
    if group == "tense":
        return extract.tense_counts(p)
    if group == "pos":
        return extract.pos_counts(p)
    if group == "keywords":
        return extract.keyword_flags(p, ctx.keywords)
    if group == "tfidf":
        _require(group, ctx)
        return transform_tfidf(ctx.tfidf, p)
    if group == "fasttext":
        _require(group, ctx)
        return document_vector(ctx.embeddings, p)
    raise ValueError(f"unknown feature group {group!r}")


def _check_bounds(group: str, values: np.ndarray):
    if group == "keywords" and not np.all((values == 0) | (values == 1)):
        raise RuntimeError("keyword flags outside {0, 1}")
    if group == "tfidf" and (values.min(initial=0) < 0 or values.max(initial=0) > 1):
        raise RuntimeError("tf-idf weight outside [0, 1]")
    if group == "sentiment" and not (-5 <= values[0] <= -1 and 1 <= values[1] <= 5):
        raise RuntimeError("sentiment outside [-5,-1] x [1,5]")


def assemble(doc: ProcessedText, spec, ctx: FeatureContext) -> FeatureVector:
    """Concatenate the requested groups in canonical order."""
    groups = normalize_spec(spec)
    for g in groups:
        _require(g, ctx)
    names, parts, ranges = [], [], {}
    start = 0
    for g in groups:
        vals = group_values(g, doc, ctx)
        _check_bounds(g, vals)
        gnames = group_names(g, ctx)
        names.extend(gnames)
        parts.append(vals)
        ranges[g] = (start, start + len(vals))
        start += len(vals)
    return FeatureVector(tuple(names), np.concatenate(parts), ranges)


def assemble_matrix(docs, spec, ctx: FeatureContext) -> np.ndarray:
    groups = normalize_spec(spec)
    dim = feature_dimension(groups, ctx)
    if not docs:
        return np.zeros((0, dim))
    return np.vstack([assemble(d, groups, ctx).values for d in docs])


def feature_dimension(spec, ctx: FeatureContext) -> int:
    return sum(len(group_names(g, ctx)) for g in normalize_spec(spec))


@dataclass
class GroupCache:
    """Precomputed per-document values of the groups that need no fitting.

    Grid search reuses these across cells and folds; only tf-idf is refitted.
    """

    matrices: dict = field(default_factory=dict)

    @classmethod
    def build(cls, docs, ctx: FeatureContext, groups=GROUP_ORDER) -> "GroupCache":
        out = {}
        for g in groups:
            if g in FITTED_GROUPS or (g == "fasttext" and ctx.embeddings is None):
                continue
            rows = []
            for d in docs:
                vals = group_values(g, d, ctx)
                _check_bounds(g, vals)
                rows.append(vals)
            out[g] = np.vstack(rows) if rows else np.zeros((0, len(group_names(g, ctx))))
        return cls(out)
