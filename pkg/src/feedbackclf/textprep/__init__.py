"""Text preprocessing: masking, lower-casing, tokenization, lemmas, POS tags, tense."""

from __future__ import annotations

from dataclasses import dataclass

from ..corpus import Language
from .lemmatizer import lemmatize
from .normalize import ACCOUNT, HASHTAG, LINK, MASK_TOKENS, lowercase, mask, tokenize
from .resources import LanguageResources, as_language, get_resources
from .tagger import EN_TAGSET, EN_TENSES, IT_TAGSET, IT_TENSES, detect_tense, pos_tag, tagset, tenses, token_tenses

__all__ = [
    "ACCOUNT", "HASHTAG", "LINK", "MASK_TOKENS", "EN_TAGSET", "IT_TAGSET", "EN_TENSES", "IT_TENSES",
    "LanguageResources", "ProcessedText", "Token", "as_language", "detect_tense", "get_resources",
    "lemmatize", "lowercase", "mask", "pos_tag", "preprocess", "tagset", "tenses", "tokenize",
]


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    tense: str | None = None

    @property
    def is_word(self) -> bool:
        return any(ch.isalnum() for ch in self.surface)


@dataclass(frozen=True)
class ProcessedText:
    original: str
    masked_lower: str
    tokens: tuple
    lemmas: tuple
    language: Language = Language.EN

    @property
    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    @property
    def word_lemmas(self) -> list[str]:
        return [t.lemma for t in self.tokens if t.is_word]


def preprocess(text: str, language=Language.EN) -> ProcessedText:
    """Mask, lower-case, tokenize, lemmatize and tag one document.

    Masking runs before lower-casing because URL detection looks at the raw
    text; the result is the same lower-cased output either way.
    """
    lang = as_language(language)
    masked_lower = lowercase(mask(text))
    words = tokenize(masked_lower, lang)
    lemmas = lemmatize(words, lang)
    tags = pos_tag(words, lang)
    tense_tags = token_tenses(words, tags, lang)
    tokens = tuple(Token(w, l, p, t) for w, l, p, t in zip(words, lemmas, tags, tense_tags))
    return ProcessedText(text, masked_lower, tokens, tuple(lemmas), lang)
