"""Lexicon-first lemmatizer with suffix-stripping fallback."""

from __future__ import annotations

from .resources import as_language, get_resources
from ..corpus import Language

_VOWELS = set("aeiou")


def _undouble(stem: str) -> str | None:
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS and stem[-1] not in "lsz":
        return stem[:-1]
    return None


def _en_candidates(word: str) -> list[str]:
    n = len(word)
    if n > 4 and word.endswith("ies"):
        return [word[:-3] + "y"]
    if n > 4 and word.endswith("ied"):
        return [word[:-3] + "y"]
    if n > 3 and word.endswith("es") and word[:-2].endswith(("s", "sh", "ch", "x", "z")):
        return [word[:-2], word[:-1]]
    if n > 3 and word.endswith("s") and not word.endswith(("ss", "us", "is", "'s")):
        return [word[:-1]]
    if n > 4 and word.endswith("ed"):
        stem = word[:-2]
        return [c for c in (stem, word[:-1], _undouble(stem)) if c]
    if n > 5 and word.endswith("ing"):
        stem = word[:-3]
        return [c for c in (stem, stem + "e", _undouble(stem)) if c]
    return []


# (suffix, replacement), longest first
_IT_RULES = [
    ("eranno", "are"), ("iranno", "ire"), ("avano", "are"), ("evano", "ere"), ("ivano", "ire"),
    ("erete", "ere"), ("avamo", "are"), ("arono", "are"), ("erono", "ere"), ("irono", "ire"), ("eremo", "are"),
    ("ando", "are"), ("endo", "ere"), ("iamo", "are"),
    ("erò", "are"), ("irò", "ire"), ("erà", "are"), ("irà", "ire"),
    ("ava", "are"), ("avo", "are"), ("eva", "ere"), ("evo", "ere"), ("iva", "ire"), ("ivo", "ire"),
    ("ato", "are"), ("ata", "are"), ("ati", "are"), ("uto", "ere"), ("uta", "ere"), ("ito", "ire"), ("ita", "ire"),
]


def _it_candidates(word: str) -> list[str]:
    out = []
    for suffix, repl in _IT_RULES:
        if word.endswith(suffix) and len(word) - len(suffix) >= 3:
            out.append(word[: -len(suffix)] + repl)
    if len(word) > 3 and word[-1] == "i":
        out.extend([word[:-1] + "o", word[:-1] + "e", word[:-1] + "a"])
    elif len(word) > 3 and word[-1] == "e":
        out.extend([word[:-1] + "a", word[:-1] + "o"])
    elif len(word) > 3 and word[-1] == "a":
        out.append(word[:-1] + "o")
    return out


def lemmatize_word(word: str, language=Language.EN) -> str:
    res = get_resources(language)
    if word in res.lemmas:
        return res.lemmas[word]
    if not word.isalpha():
        return word
    if res.language is Language.EN:
        if word in res.known_words:
            return word
        cands = _en_candidates(word)
        for c in cands:
            if c in res.known_words:
                return c
        # no dictionary confirmation: prefer the un-doubled stem ("stopped" -> "stop")
        if cands:
            return cands[-1] if word.endswith(("ed", "ing")) and _undouble(cands[0]) else cands[0]
        return word
    # Italian inflected forms may appear in the tag lexicon, so confirm rules first
    for c in _it_candidates(word):
        if c in res.known_words and c != word:
            return c
    if word in res.known_words:
        return word
    # only verb endings are stripped without confirmation; noun plurals are too ambiguous
    for suffix, repl in _IT_RULES:
        if word.endswith(suffix) and len(word) - len(suffix) >= 3 and len(word) >= 6:
            return word[: -len(suffix)] + repl
    return word


def lemmatize(tokens: list[str], language=Language.EN) -> list[str]:
    """Map each token to its root form; the output has the same length."""
    lang = as_language(language)
    return [lemmatize_word(t, lang) for t in tokens]
