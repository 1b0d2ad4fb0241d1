import pytest
from hypothesis import given
from hypothesis import strategies as st

from feedbackclf.corpus import Language
from feedbackclf.textprep import (EN_TAGSET, EN_TENSES, IT_TAGSET, IT_TENSES, detect_tense, lemmatize, lowercase, mask,
                                  pos_tag, preprocess, tokenize)


class TestLowercase:
    def test_examples(self):
        assert lowercase("FEATURE") == "feature"
        assert lowercase("Feature") == lowercase("feature")
        assert lowercase("") == ""

    @given(st.text())
    def test_idempotent(self, s):
        assert lowercase(lowercase(s)) == lowercase(s)


class TestMask:
    def test_account(self):
        assert mask("@vodafone my net is down") == "account my net is down"

    def test_link(self):
        assert mask("see https://t.co/abc") == "see link"

    def test_hashtag(self):
        assert mask("#fail #fail") == "hashtag hashtag"

    def test_uppercase_url_masked_before_lowercasing(self):
        assert preprocess("Visit HTTP://Example.COM/X now").masked_lower == "visit link now"

    @given(st.lists(st.sampled_from(["app", "crash", "@bob", "#win", "http://x.io/a", "ok", "great"]), max_size=12))
    def test_token_count_preserved(self, words):
        text = " ".join(words)
        assert len(mask(text).split()) == len(words)

    @given(st.text(alphabet="abcXYZ @#:/. h", max_size=40))
    def test_pipeline_idempotent(self, s):
        once = lowercase(mask(s))
        assert lowercase(mask(once)) == once


class TestTokenize:
    def test_punctuation(self):
        assert tokenize("app crashes!") == ["app", "crashes", "!"]

    def test_empty(self):
        assert tokenize("") == []

    def test_contraction(self):
        assert tokenize("don't") == ["do", "n't"]

    def test_mask_tokens_whole(self):
        assert tokenize(lowercase(mask("@a: see https://x.y/z #b"))) == ["account", ":", "see", "link", "hashtag"]


class TestLemmatize:
    def test_examples(self):
        assert lemmatize(["saw", "crashes", "app"]) == ["see", "crash", "app"]

    @given(st.lists(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=10), max_size=10))
    def test_length_preserved(self, toks):
        assert len(lemmatize(toks)) == len(toks)
        assert len(lemmatize(toks, Language.IT)) == len(toks)


class TestTagger:
    def test_tagset_sizes(self):
        assert len(EN_TAGSET) == 16 and len(set(EN_TAGSET)) == 16
        assert len(IT_TAGSET) == 18 and len(set(IT_TAGSET)) == 18
        assert len(EN_TENSES) == 2 and len(IT_TENSES) == 4

    def test_closed_class(self):
        assert pos_tag(["the"]) == ["DET"]

    def test_verb_in_context(self):
        assert pos_tag(["app", "crashes"])[1] == "VERB_PRES"

    @given(st.lists(st.text(alphabet="abcdefghijklmnopqrstuvwxyz!?.", min_size=1, max_size=8), min_size=1, max_size=15))
    def test_one_tag_per_token(self, toks):
        for lang, tags in ((Language.EN, EN_TAGSET), (Language.IT, IT_TAGSET)):
            out = pos_tag(toks, lang)
            assert len(out) == len(toks)
            assert set(out) <= set(tags)
            assert out == pos_tag(toks, lang)

    def test_unknown_language(self):
        with pytest.raises(ValueError):
            pos_tag(["a"], "FR")


class TestTense:
    def test_past(self):
        assert detect_tense(preprocess("I updated the app").tokens, Language.EN) == {"past": 1, "present": 0}

    def test_no_verb(self):
        assert set(detect_tense(preprocess("great app").tokens, Language.EN).values()) == {0}

    def test_vector_lengths(self):
        assert len(detect_tense(preprocess("ciao").tokens, Language.IT)) == 4
        assert len(detect_tense(preprocess("hi").tokens, Language.EN)) == 2

    def test_italian_future(self):
        counts = detect_tense(preprocess("domani chiameremo il servizio", Language.IT).tokens, Language.IT)
        assert counts["futuro"] == 1


class TestPreprocess:
    def test_invariants(self):
        p = preprocess("@Vodafone my INTERNET crashed again!! #fail https://t.co/x")
        assert len(p.tokens) == len(p.lemmas)
        assert "@" not in p.masked_lower and "#" not in p.masked_lower and "http" not in p.masked_lower
        assert p.masked_lower == p.masked_lower.lower()
        assert all(t.surface for t in p.tokens)

    def test_deterministic(self):
        assert preprocess("Il modem non funziona più", Language.IT) == preprocess("Il modem non funziona più",
                                                                                   Language.IT)
