"""Coarse deterministic part-of-speech tagger and tense detection.

The tagger is a closed-class lexicon plus suffix and left-context rules. Only
tag counts are consumed downstream, so the goal is stable, explainable output
over fixed tagsets (16 tags for English, 18 for Italian), not parity with a
statistical tagger.

English verbs carry their tense in the tag (``VERB_PAST``/``VERB_PRES``);
Italian tense is read from verb morphology.
"""

from __future__ import annotations

import unicodedata

from .resources import as_language, get_resources
from ..corpus import Language

EN_TAGSET = (
    "ADJ", "ADP", "ADV", "AUX", "CONJ", "DET", "INTJ", "NOUN",
    "NUM", "PART", "PRON", "PROPN", "PUNCT", "SYM", "VERB_PAST", "VERB_PRES",
)
IT_TAGSET = (
    "ADJ", "ADP", "ADP_DET", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN",
    "NUM", "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
)
EN_TENSES = ("past", "present")
IT_TENSES = ("presente", "passato", "imperfetto", "futuro")

AMBIGUOUS = "NOUN/VERB"


def tagset(language) -> tuple:
    return EN_TAGSET if as_language(language) is Language.EN else IT_TAGSET


def tenses(language) -> tuple:
    return EN_TENSES if as_language(language) is Language.EN else IT_TENSES


def _shape_tag(tok: str) -> str | None:
    if not any(ch.isalnum() for ch in tok):
        if all(unicodedata.category(ch).startswith("P") for ch in tok):
            return "PUNCT"
        return "SYM"
    if tok.replace(".", "").replace(",", "").replace(":", "").isdigit():
        return "NUM"
    return None


# ---------------------------------------------------------------- English

_EN_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ity", "ance", "ence", "ship", "ism", "ist", "er", "or")
_EN_ADJ_SUFFIXES = ("able", "ible", "ful", "ous", "ive", "less", "ical", "ish", "ic", "al")


def _en_guess(tok: str, prev: str | None) -> str:
    if len(tok) > 4 and tok.endswith("ly"):
        return "ADV"
    if len(tok) > 4 and tok.endswith("ed"):
        return "VERB_PAST"
    if len(tok) > 5 and tok.endswith("ing"):
        return "NOUN" if prev in ("DET", "ADJ") else "VERB_PRES"
    if tok.endswith(_EN_NOUN_SUFFIXES) and len(tok) > 4:
        return "NOUN"
    if tok.endswith(_EN_ADJ_SUFFIXES) and len(tok) > 4:
        return "ADJ"
    if len(tok) > 3 and tok.endswith("s") and not tok.endswith("ss"):
        return AMBIGUOUS
    return "NOUN"


def _en_resolve(tok: str, prev: str | None) -> str:
    """Noun or verb, from the tag on the left."""
    if prev in ("DET", "ADJ", "ADP", "NUM"):
        verb = False
    elif prev in ("PRON", "PROPN", "AUX", "PART"):
        verb = True
    elif prev == "NOUN":
        # "app crashes" vs "app update"
        verb = tok.endswith("s") or tok.endswith("ed")
    elif prev in (None, "PUNCT", "CONJ", "ADV", "INTJ"):
        verb = True
    else:
        verb = False
    if not verb:
        return "NOUN"
    return "VERB_PAST" if tok.endswith("ed") else "VERB_PRES"


def _tag_en(tokens: list[str]) -> list[str]:
    lex = get_resources(Language.EN).pos
    tags = []
    prev = None
    for tok in tokens:
        low = tok.lower()
        tag = lex.get(low) or _shape_tag(low) or _en_guess(low, prev)
        if tag == AMBIGUOUS:
            tag = _en_resolve(low, prev)
        tags.append(tag)
        prev = tag
    return tags


# ---------------------------------------------------------------- Italian

_IT_PARTICIPLE = ("ato", "ata", "ati", "ate", "uto", "uta", "uti", "ute", "ito", "ita", "iti", "ite")
_IT_FUTURE = (
    "erò", "irò", "arò", "erai", "irai", "arai", "erà", "irà", "arà",
    "eremo", "iremo", "aremo", "erete", "irete", "arete", "eranno", "iranno", "aranno",
)
_IT_IMPERFECT = (
    "avo", "avi", "ava", "avamo", "avate", "avano",
    "evo", "evi", "eva", "evamo", "evate", "evano",
    "ivo", "ivi", "iva", "ivamo", "ivate", "ivano",
)
_IT_REMOTE = ("arono", "erono", "irono", "ettero", "ette")
_IT_NOUN_SUFFIXES = ("zione", "zioni", "mento", "menti", "tà", "ore", "ori", "ista", "ismo")
_IT_ADJ_SUFFIXES = ("oso", "osa", "osi", "ose", "bile", "bili", "ale", "ali", "ico", "ica", "ici", "iche")
_IT_VERB_CONTEXT = ("PRON", "AUX", "ADV")

_IT_IRREGULAR_TENSE = {
    "presente": "è sono sei siamo siete ho hai ha abbiamo avete hanno posso puoi può possiamo potete possono "
                "devo deve dobbiamo dovete devono voglio vuole vogliamo fa fanno faccio va vado vanno vedo vede sia siano",
    "imperfetto": "era erano ero eri eravamo avevo aveva avevano",
    "passato": "fu furono fece vidi",
    "futuro": "sarà saranno sarò avrà",
}
_IT_IRREGULAR_TENSE = {w: t for t, ws in _IT_IRREGULAR_TENSE.items() for w in ws.split()}


def _it_guess(tok: str, prev: str | None) -> str:
    if any(ch.isdigit() for ch in tok):
        return "X"
    if len(tok) > 6 and tok.endswith("mente"):
        return "ADV"
    if len(tok) > 4 and tok.endswith(("are", "ere", "ire")):
        return "VERB"
    if len(tok) > 5 and tok.endswith(("ando", "endo")):
        return "VERB"
    if len(tok) > 4 and tok.endswith(_IT_PARTICIPLE):
        return "VERB" if prev == "AUX" else "ADJ"
    if len(tok) > 4 and tok.endswith(_IT_FUTURE + _IT_IMPERFECT + _IT_REMOTE + ("iamo",)):
        return "VERB"
    if tok.endswith(_IT_NOUN_SUFFIXES) and len(tok) > 4:
        return "NOUN"
    if tok.endswith(_IT_ADJ_SUFFIXES) and len(tok) > 4:
        return "ADJ"
    if len(tok) > 3 and tok.endswith(("ano", "ono")) and prev in _IT_VERB_CONTEXT + ("NOUN", "PROPN"):
        return "VERB"
    if prev in _IT_VERB_CONTEXT and tok[-1:] in ("a", "e", "o", "i"):
        return "VERB"
    return "NOUN"


def _tag_it(tokens: list[str]) -> list[str]:
    lex = get_resources(Language.IT).pos
    tags = []
    prev = None
    for tok in tokens:
        low = tok.lower()
        tag = lex.get(low) or _shape_tag(low) or _it_guess(low, prev)
        tags.append(tag)
        prev = tag
    return tags


def pos_tag(tokens: list[str], language=Language.EN) -> list[str]:
    """One tag per token, drawn from the language's fixed tagset."""
    lang = as_language(language)
    return _tag_en(tokens) if lang is Language.EN else _tag_it(tokens)


def _it_token_tense(i: int, words: list[str], tags: list[str]) -> str | None:
    tok, tag = words[i], tags[i]
    if tag not in ("VERB", "AUX"):
        return None
    is_participle = len(tok) > 4 and tok.endswith(_IT_PARTICIPLE) or tok in ("stato", "stata", "stati", "state", "avuto", "fatto", "fatta", "visto", "vista", "andato", "andata")
    if tag == "AUX":
        # compound past: the participle carries the tense
        for j in (i + 1, i + 2):
            if j < len(words) and tags[j] in ("VERB", "AUX") and (words[j].endswith(_IT_PARTICIPLE) or words[j] in ("stato", "stata", "avuto", "fatto", "visto")):
                return None
    if tok in _IT_IRREGULAR_TENSE:
        return _IT_IRREGULAR_TENSE[tok]
    if is_participle:
        return "passato" if any(tags[j] == "AUX" for j in (i - 1, i - 2) if j >= 0) else None
    if tok.endswith(("are", "ere", "ire", "ando", "endo", "rebbe", "rei", "remmo", "rebbero")):
        return None
    if tok.endswith(_IT_FUTURE):
        return "futuro"
    if tok.endswith(_IT_IMPERFECT):
        return "imperfetto"
    if tok.endswith(_IT_REMOTE) or (len(tok) > 3 and tok.endswith(("ò", "ì"))):
        return "passato"
    return "presente"


def token_tenses(words: list[str], tags: list[str], language=Language.EN) -> list[str | None]:
    """Tense label for every token (``None`` for non-verbs and non-finite forms)."""
    lang = as_language(language)
    if lang is Language.EN:
        return ["past" if t == "VERB_PAST" else "present" if t == "VERB_PRES" else None for t in tags]
    lowered = [w.lower() for w in words]
    return [_it_token_tense(i, lowered, tags) for i in range(len(words))]


def detect_tense(tokens, language=Language.EN) -> dict:
    """Count verb tenses over tagged tokens; keys are the language's tense set."""
    lang = as_language(language)
    counts = dict.fromkeys(tenses(lang), 0)
    for tok in tokens:
        if tok.tense is not None:
            counts[tok.tense] += 1
    return counts
