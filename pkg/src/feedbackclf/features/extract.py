"""Per-document feature groups: counts, sentiment, keywords, POS tags, tense."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus import Language
from ..textprep import ProcessedText, as_language, get_resources, tagset, tenses

SENTIMENT_NEG_RANGE = (-5, -1)
SENTIMENT_POS_RANGE = (1, 5)


@dataclass(frozen=True)
class SentimentLexicon:
    """Lemma -> integer strength in -5..-1 or 1..5."""

    language: Language
    entries: dict

    def __post_init__(self):
        for word, strength in self.entries.items():
            if strength == 0 or not -5 <= strength <= 5 or int(strength) != strength:
                raise ValueError(f"sentiment strength for {word!r} must be a non-zero integer in [-5, 5], got {strength}")


@dataclass(frozen=True)
class KeywordList:
    language: Language
    keywords: tuple

    def __post_init__(self):
        kws = tuple(self.keywords)
        if len(set(kws)) != len(kws):
            raise ValueError("keyword list contains duplicates")
        for kw in kws:
            if kw != kw.lower():
                raise ValueError(f"keyword {kw!r} is not lowercase")
        object.__setattr__(self, "keywords", kws)

    def __len__(self):
        return len(self.keywords)


def default_sentiment_lexicon(language) -> SentimentLexicon:
    res = get_resources(language)
    return SentimentLexicon(res.language, dict(res.sentiment))


def default_keywords(language) -> KeywordList:
    res = get_resources(language)
    return KeywordList(res.language, res.keywords)


def default_stopwords(language) -> frozenset:
    return get_resources(language).stopwords


def count_words(p: ProcessedText) -> int:
    """Number of non-punctuation tokens; masks count as words."""
    return sum(1 for t in p.tokens if t.is_word)


def count_stopwords(p: ProcessedText, stopwords) -> int:
    return sum(1 for t in p.tokens if t.surface in stopwords)


def score_sentiment(p: ProcessedText, lex: SentimentLexicon) -> tuple[int, int]:
    """Strongest negative and positive lexicon hit, floored at -1 / +1."""
    if as_language(p.language) is not lex.language:
        raise ValueError(f"sentiment lexicon is {lex.language.value} but document is {as_language(p.language).value}")
    neg, pos = -1, 1
    for tok in p.tokens:
        strength = lex.entries.get(tok.lemma)
        if strength is None:
            strength = lex.entries.get(tok.surface)
        if strength is None:
            continue
        if strength < 0:
            neg = min(neg, strength)
        else:
            pos = max(pos, strength)
    assert SENTIMENT_NEG_RANGE[0] <= neg <= SENTIMENT_NEG_RANGE[1]
    assert SENTIMENT_POS_RANGE[0] <= pos <= SENTIMENT_POS_RANGE[1]
    return neg, pos


def keyword_flags(p: ProcessedText, kw: KeywordList) -> np.ndarray:
    lemmas = set(p.lemmas)
    return np.array([1.0 if k in lemmas else 0.0 for k in kw.keywords])


def pos_counts(p: ProcessedText) -> np.ndarray:
    tags = tagset(p.language)
    index = {t: i for i, t in enumerate(tags)}
    out = np.zeros(len(tags))
    for tok in p.tokens:
        out[index[tok.pos]] += 1
    return out


def tense_counts(p: ProcessedText) -> np.ndarray:
    names = tenses(p.language)
    index = {t: i for i, t in enumerate(names)}
    out = np.zeros(len(names))
    for tok in p.tokens:
        if tok.tense is not None:
            out[index[tok.tense]] += 1
    return out
