import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feedbackclf.corpus import Language
from feedbackclf.embeddings import (EmbeddingTable, SkipgramConfig, char_ngrams, document_vector, fnv1a_32,
                                    load_embeddings, ngram_buckets, save_embeddings, train_skipgram, vector_for_word)
from feedbackclf.errors import DataError
from feedbackclf.textprep import preprocess


def write_vec(path, rows, dim):
    lines = [f"{len(rows)} {dim}"] + [w + " " + " ".join(str(x) for x in v) for w, v in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestLoad:
    def test_two_words(self, tmp_path):
        p = tmp_path / "e.vec"
        write_vec(p, [("a", [0.5] * 300), ("b", [1.0] * 300)], 300)
        t = load_embeddings(p)
        assert len(t) == 2 and t.dimension == 300

    def test_short_line(self, tmp_path):
        p = tmp_path / "e.vec"
        write_vec(p, [("a", [0.5] * 300), ("b", [1.0] * 299)], 300)
        with pytest.raises(DataError) as exc:
            load_embeddings(p)
        assert exc.value.line == 3

    def test_wrong_dimension(self, tmp_path):
        p = tmp_path / "e.vec"
        write_vec(p, [("a", [0.5] * 100)], 100)
        with pytest.raises(DataError, match="dimension"):
            load_embeddings(p)
        assert load_embeddings(p, dimension=None).dimension == 100

    def test_duplicate_word(self, tmp_path):
        p = tmp_path / "e.vec"
        write_vec(p, [("a", [0.5] * 4), ("a", [1.0] * 4)], 4)
        with pytest.raises(DataError, match="duplicate"):
            load_embeddings(p, dimension=4)

    def test_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        t = EmbeddingTable(("x", "y", "z"), rng.normal(size=(3, 7)), subword_buckets=rng.normal(size=(11, 7)))
        p = tmp_path / "t.vec"
        save_embeddings(t, p)
        back = load_embeddings(p, dimension=None)
        assert back.words == t.words
        assert back.vectors.tobytes() == t.vectors.tobytes()
        assert back.subword_buckets.tobytes() == t.subword_buckets.tobytes()
        save_embeddings(back, tmp_path / "u.vec")
        assert (tmp_path / "u.vec").read_bytes() == p.read_bytes()


class TestLookup:
    def table(self, buckets=None):
        return EmbeddingTable(("app", "crash"), np.array([[1.0, 2.0], [3.0, -1.0]]), Language.EN, buckets)

    def test_known(self):
        np.testing.assert_array_equal(vector_for_word(self.table(), "crash"), [3.0, -1.0])

    def test_oov_no_buckets(self):
        np.testing.assert_array_equal(vector_for_word(self.table(), "nope"), [0.0, 0.0])

    def test_fnv_reference_values(self):
        assert fnv1a_32(b"") == 0x811C9DC5
        assert fnv1a_32(b"a") == 0xE40C292C
        assert fnv1a_32(b"foobar") == 0xBF9CF968

    def test_oov_subword_mean(self):
        grams = char_ngrams("crashhh")
        assert grams[:4] == ["<cr", "<cra", "<cras", "<crash"]
        assert len(grams) == 7 + 6 + 5 + 4
        assert "hh>" in grams and "ashhh>" in grams
        rng = np.random.default_rng(1)
        buckets = rng.normal(size=(97, 2))
        ids = [fnv1a_32(g.encode()) % 97 for g in grams]
        assert ngram_buckets("crashhh", 97) == ids
        expected = buckets[ids].mean(axis=0)
        np.testing.assert_allclose(vector_for_word(self.table(buckets), "crashhh"), expected, rtol=0, atol=1e-15)

    def test_document_vector(self):
        t = self.table()
        np.testing.assert_array_equal(document_vector(t, preprocess("crash")), [3.0, -1.0])
        np.testing.assert_array_equal(document_vector(t, preprocess("app crash")), [2.0, 0.5])
        np.testing.assert_array_equal(document_vector(t, preprocess("")), [0.0, 0.0])

    @given(st.permutations(["app", "crash", "crash", "app", "zzz"]))
    def test_permutation_invariant_and_bounded(self, words):
        t = self.table()
        v = document_vector(t, words)
        np.testing.assert_allclose(v, document_vector(t, sorted(words)), atol=1e-15)
        stack = np.array([vector_for_word(t, w) for w in words])
        assert np.all(v >= stack.min(axis=0) - 1e-15) and np.all(v <= stack.max(axis=0) + 1e-15)

    def test_read_only(self):
        with pytest.raises(ValueError):
            self.table().vectors[0, 0] = 9.0


def _toy_corpus():
    rng = np.random.default_rng(0)
    fillers = ["phone", "today", "screen", "music", "photo", "video", "map", "game", "time", "version"]
    docs = []
    for _ in range(300):
        adj = "good" if rng.random() < 0.5 else "great"
        docs.append([adj, "app"] + list(rng.choice(fillers, size=2)))
        docs.append(["crash", str(rng.choice(fillers)), "broken", str(rng.choice(fillers))])
    return docs


class TestSkipgram:
    CFG = SkipgramConfig(dimension=16, window=2, epochs=5, min_count=1, buckets=200, learning_rate=0.05)

    def test_interchangeable_contexts(self):
        t = train_skipgram(_toy_corpus(), self.CFG, seed=3)

        def cos(a, b):
            u, v = vector_for_word(t, a), vector_for_word(t, b)
            return float(u @ v / np.linalg.norm(u) / np.linalg.norm(v))

        assert cos("good", "great") > cos("good", "broken")

    def test_deterministic(self):
        corpus = _toy_corpus()[:100]
        a = train_skipgram(corpus, self.CFG, seed=9)
        b = train_skipgram(corpus, self.CFG, seed=9)
        assert a.checksum() == b.checksum()
        assert a.subword_buckets.tobytes() == b.subword_buckets.tobytes()

    def test_finite_and_loss_decreases(self):
        t, hist = train_skipgram(_toy_corpus(), self.CFG, seed=1, return_history=True)
        assert np.isfinite(t.vectors).all()
        assert hist[-1] < hist[0]

    def test_too_small(self):
        with pytest.raises(DataError):
            train_skipgram([["a", "b", "c"]], self.CFG)

    def test_accepts_processed_text(self):
        docs = [preprocess("good app works well on my phone today") for _ in range(20)]
        t = train_skipgram(docs, self.CFG, seed=0, language="EN")
        assert "app" in t and t.language == Language.EN

    @settings(max_examples=10, deadline=None)
    @given(st.integers(-5, -1), st.integers(0, 5))
    def test_config_validation(self, bad, ok):
        with pytest.raises(ValueError):
            SkipgramConfig(dimension=bad)
        SkipgramConfig(window=ok + 1)
