"""Unigram tf-idf over lemmas with smoothed idf and L2 row normalization."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..corpus import fingerprint_ids
from ..errors import DataError
from ..textprep import ProcessedText

DEFAULT_DF_BOUNDS = (2, 0.8)


@dataclass(frozen=True)
class TfidfModel:
    vocabulary: tuple
    idf: np.ndarray
    df_bounds: tuple
    n_documents: int
    fitted_on: str = ""
    fitted_ids: tuple = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.vocabulary)})

    def __len__(self):
        return len(self.vocabulary)

    def to_dict(self) -> dict:
        return {
            "vocabulary": list(self.vocabulary),
            "idf": [float(v) for v in self.idf],
            "df_bounds": list(self.df_bounds),
            "n_documents": self.n_documents,
            "fitted_on": self.fitted_on,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TfidfModel":
        return cls(tuple(d["vocabulary"]), np.array(d["idf"], dtype=float), tuple(d["df_bounds"]),
                   int(d["n_documents"]), d.get("fitted_on", ""))


def _terms(p) -> list[str]:
    return p.word_lemmas if isinstance(p, ProcessedText) else list(p)


def _df_threshold(bound, n_docs: int) -> float:
    # ints are document counts, floats are fractions of the corpus
    if isinstance(bound, float):
        return bound * n_docs
    return float(bound)


def fit_tfidf(train_docs, df_bounds=DEFAULT_DF_BOUNDS, ids=None) -> TfidfModel:
    """Learn vocabulary and idf weights from training documents only.

    ``idf(t) = 1 + ln((1 + N) / (1 + df(t)))``. A term is kept when
    ``min_df <= df(t) <= max_df``.
    """
    docs = [_terms(p) for p in train_docs]
    n = len(docs)
    if n == 0:
        raise DataError("cannot fit tf-idf on an empty training corpus")
    min_df, max_df = df_bounds
    lo, hi = _df_threshold(min_df, n), _df_threshold(max_df, n)
    df = Counter()
    for terms in docs:
        df.update(set(terms))
    vocab = sorted(t for t, c in df.items() if lo <= c <= hi)
    if not vocab:
        raise DataError(f"tf-idf vocabulary is empty after pruning with df_bounds={tuple(df_bounds)} on {n} documents")
    idf = np.array([1.0 + math.log((1.0 + n) / (1.0 + df[t])) for t in vocab])
    ids = tuple(ids) if ids is not None else ()
    return TfidfModel(tuple(vocab), idf, (min_df, max_df), n, fingerprint_ids(ids) if ids else "", ids)


def transform_tfidf(m: TfidfModel, p) -> np.ndarray:
    """Weights for one document; out-of-vocabulary terms are ignored."""
    out = np.zeros(len(m.vocabulary))
    for term, count in Counter(_terms(p)).items():
        j = m._index.get(term)
        if j is not None:
            out[j] = count * m.idf[j]
    norm = np.sqrt(np.sum(out * out))
    if norm > 0:
        out /= norm
    np.clip(out, 0.0, 1.0, out=out)
    return out


def transform_many(m: TfidfModel, docs) -> np.ndarray:
    if not docs:
        return np.zeros((0, len(m.vocabulary)))
    return np.vstack([transform_tfidf(m, p) for p in docs])
