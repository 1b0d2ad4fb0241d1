"""Lower-casing, masking of accounts/links/hashtags, and tokenization."""

from __future__ import annotations

import re

from .resources import as_language
from ..corpus import Language

ACCOUNT = "account"
LINK = "link"
HASHTAG = "hashtag"
MASK_TOKENS = frozenset({ACCOUNT, LINK, HASHTAG})

# Links are tried before handles so "@" or "#" inside a URL never leaks out.
# A run of sigils ("@@user", "@#tag") is consumed whole; the first sigil decides the mask.
_MASK_RE = re.compile(
    r"(?P<link>(?:https?://|www\.)\S+)|(?<!\w)(?P<tag>[@#]+\w+)",
    re.IGNORECASE,
)

_TOKEN_RE = re.compile(r"\d+(?:[.,:]\d+)+|[^\W_]+(?:'[^\W_]+)*'?|\S")

_EN_CLITICS = ("'s", "'re", "'ve", "'ll", "'d", "'m")
_EN_NEG_SPECIAL = {"won't": ["wo", "n't"], "can't": ["ca", "n't"], "shan't": ["sha", "n't"]}


def lowercase(text: str) -> str:
    return text.lower()


def _mask_sub(match: re.Match) -> str:
    if match.group("link") is not None:
        return LINK
    return ACCOUNT if match.group("tag").startswith("@") else HASHTAG


def mask(text: str) -> str:
    """Replace @handles, URLs and #tags with the words account, link, hashtag."""
    return _MASK_RE.sub(_mask_sub, text)


def _split_en(word: str) -> list[str]:
    low = word.lower()
    if low in _EN_NEG_SPECIAL:
        a, b = _EN_NEG_SPECIAL[low]
        return [word[: len(a)], word[len(a):]]
    if low.endswith("n't") and len(low) > 3:
        return [word[:-3], word[-3:]]
    for clitic in _EN_CLITICS:
        if low.endswith(clitic) and len(low) > len(clitic):
            return [word[: -len(clitic)], word[-len(clitic):]]
    if word.endswith("'"):
        return [word[:-1], "'"]
    return [word]


def _split_it(word: str) -> list[str]:
    # elision: "dell'app" -> "dell'", "app"; a trailing apostrophe stays ("po'")
    parts = []
    rest = word
    while "'" in rest[:-1]:
        i = rest.index("'")
        parts.append(rest[: i + 1])
        rest = rest[i + 1:]
    parts.append(rest)
    return parts


def tokenize(text: str, language=Language.EN) -> list[str]:
    """Split on whitespace and punctuation; punctuation marks become tokens."""
    lang = as_language(language)
    text = text.replace("’", "'")
    out = []
    for tok in _TOKEN_RE.findall(text):
        if "'" in tok and len(tok) > 1:
            out.extend(_split_en(tok) if lang is Language.EN else _split_it(tok))
        else:
            out.append(tok)
    return out
