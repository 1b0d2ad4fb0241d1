import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feedbackclf import classifiers
from feedbackclf.classifiers import (DecisionTree, DtParams, RandomForest, RfParams, TrainedClassifier, fit, predict,
                                     predict_score, resolve_max_features, tree_rng)

SEPARABLE_X = np.array([[0, 0], [1, 0], [0, 1], [1, 1], [3, 3], [4, 3], [3, 4], [4, 4]], dtype=float)
SEPARABLE_Y = np.array([0, 0, 0, 0, 1, 1, 1, 1])


def blobs(n=60, seed=0, d=3):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2
    X = rng.normal(size=(n, d)) + 3.0 * y[:, None]
    return X, y


class TestFitContract:
    @pytest.mark.parametrize("algo", classifiers.ALGORITHMS)
    def test_single_class_rejected(self, algo):
        with pytest.raises(ValueError, match="single class"):
            fit(algo, {}, np.zeros((3, 2)), [1, 1, 1])

    @pytest.mark.parametrize("algo", classifiers.ALGORITHMS)
    def test_nan_rejected(self, algo):
        X = np.array([[0.0], [np.nan]])
        with pytest.raises(ValueError, match="NaN"):
            fit(algo, {}, X, [0, 1])

    @pytest.mark.parametrize("algo", classifiers.ALGORITHMS)
    def test_dimension_mismatch(self, algo):
        m = fit(algo, {}, SEPARABLE_X, SEPARABLE_Y)
        with pytest.raises(ValueError, match="dimension"):
            predict(m, np.zeros((1, 3)))

    @pytest.mark.parametrize("algo", classifiers.ALGORITHMS)
    def test_deterministic_and_round_trip(self, algo):
        X, y = blobs()
        a = fit(algo, {}, X, y, seed=5)
        b = fit(algo, {}, X, y, seed=5)
        np.testing.assert_array_equal(predict_score(a, X), predict_score(b, X))
        back = TrainedClassifier.from_dict(a.to_dict())
        assert predict_score(back, X).tobytes() == predict_score(a, X).tobytes()

    @pytest.mark.parametrize("algo", classifiers.ALGORITHMS)
    def test_threshold(self, algo):
        X, y = blobs(seed=3)
        m = fit(algo, {}, X, y)
        s = predict_score(m, X)
        assert np.all((s >= 0) & (s <= 1))
        np.testing.assert_array_equal(predict(m, X), (s >= 0.5).astype(int))

    def test_unknown_param(self):
        with pytest.raises(ValueError, match="depth"):
            classifiers.make_params("dt", {"depth": 3})

    def test_aliases_and_none_strings(self):
        assert classifiers.normalize_algorithm("RF") == "random_forest"
        assert classifiers.make_params("rf", {"max_features": "None"}).max_features is None

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            DtParams(min_samples_split=1)
        with pytest.raises(ValueError):
            DtParams(min_samples_leaf=0)
        with pytest.raises(ValueError):
            RfParams(n_estimators=0)


class TestDecisionTree:
    def test_separable_training_accuracy(self):
        m = fit("decision_tree", {"max_depth": None}, SEPARABLE_X, SEPARABLE_Y)
        assert (predict(m, SEPARABLE_X) == SEPARABLE_Y).all()

    def test_stump(self):
        X, y = blobs(80, seed=1)
        m = fit("decision_tree", {"max_depth": 1}, X, y)
        assert m.model.n_leaves <= 2 and m.model.depth <= 1

    @settings(max_examples=20, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 8), st.integers(2, 10), st.sampled_from(["best", "random"]))
    def test_constraints(self, depth, leaf, split, splitter):
        X, y = blobs(70, seed=depth)
        p = DtParams("entropy", depth, leaf, split, splitter)
        tree = DecisionTree(p).fit(X, y, tree_rng(0, 0))
        assert tree.depth <= depth
        counts = np.bincount(tree.apply(X))
        assert counts[counts > 0].min() >= leaf

    def test_gini_and_entropy_agree_on_clusters(self):
        g = DecisionTree(DtParams("gini", 1)).fit(SEPARABLE_X, SEPARABLE_Y, tree_rng(0, 0))
        e = DecisionTree(DtParams("entropy", 1)).fit(SEPARABLE_X, SEPARABLE_Y, tree_rng(0, 0))
        np.testing.assert_array_equal(g.apply(SEPARABLE_X), e.apply(SEPARABLE_X))

    def test_row_permutation_invariant(self):
        X, y = blobs(50, seed=4)
        perm = np.random.default_rng(0).permutation(len(y))
        a = DecisionTree(DtParams()).fit(X, y, tree_rng(1, 0))
        b = DecisionTree(DtParams()).fit(X[perm], y[perm], tree_rng(1, 0))
        grid = np.random.default_rng(9).normal(size=(200, 3)) * 3
        np.testing.assert_array_equal(a.predict_proba(grid), b.predict_proba(grid))

    def test_midpoint_thresholds(self):
        X = np.array([[1.0], [3.0]])
        tree = DecisionTree(DtParams()).fit(X, np.array([0, 1]), tree_rng(0, 0))
        assert tree.predict_proba(np.array([[1.99]]))[0] == 0.0
        assert tree.predict_proba(np.array([[2.01]]))[0] == 1.0


class TestForest:
    def test_vote_fraction(self):
        class Stub:
            def __init__(self, v):
                self.v = v

            def predict_proba(self, X):
                return np.full(len(X), self.v)

        rf = RandomForest(RfParams(n_estimators=10))
        rf.trees = [Stub(1.0)] * 7 + [Stub(0.0)] * 3
        assert rf.predict_proba(np.zeros((1, 2)))[0] == pytest.approx(0.7)

    def test_single_tree_equals_dt(self):
        X, y = blobs(60, seed=2)
        dt = fit("decision_tree", {}, X, y, seed=11)
        rf = fit("random_forest", {"n_estimators": 1, "bootstrap": False, "max_features": None}, X, y, seed=11)
        grid = np.random.default_rng(3).normal(size=(300, 3)) * 3
        np.testing.assert_array_equal(predict(dt, grid), predict(rf, grid))

    def test_max_features(self):
        assert resolve_max_features("auto", 100) == 10
        assert resolve_max_features("log2", 100) == 6
        assert resolve_max_features(None, 100) == 100
        assert resolve_max_features("none", 7) == 7

    def test_tree_streams_independent_of_order(self):
        a = [tree_rng(5, t).random() for t in range(4)]
        b = [tree_rng(5, t).random() for t in reversed(range(4))]
        assert a == b[::-1]


class TestNaiveBayes:
    def test_closed_form(self):
        X = np.array([[0.0], [1.0], [10.0], [11.0]])
        y = np.array([0, 0, 1, 1])
        m = fit("naive_bayes", {"var_smoothing": 1e-9}, X, y)
        eps = 1e-9 * 25.25  # population variance of the whole column
        var = 0.25 + eps

        def density(x, mu):
            return math.exp(-(x - mu) ** 2 / (2 * var)) / math.sqrt(2 * math.pi * var)

        for x in (0.0, 4.0, 5.5, 6.0, 10.0):
            p0, p1 = 0.5 * density(x, 0.5), 0.5 * density(x, 10.5)
            expected = p1 / (p0 + p1)
            assert abs(predict_score(m, [x]) - expected) < 1e-9

    def test_row_permutation_exact(self):
        X, y = blobs(40, seed=8)
        perm = np.random.default_rng(1).permutation(len(y))
        a = fit("naive_bayes", {}, X, y)
        b = fit("naive_bayes", {}, X[perm], y[perm])
        np.testing.assert_allclose(predict_score(a, X), predict_score(b, X), rtol=0, atol=1e-12)

    def test_constant_feature(self):
        X = np.array([[1.0, 0], [1.0, 1], [1.0, 5], [1.0, 6]])
        m = fit("naive_bayes", {}, X, [0, 0, 1, 1])
        assert np.isfinite(predict_score(m, X)).all()


class TestSvm:
    def test_monotone_along_ray(self):
        X, y = blobs(80, seed=6)
        m = fit("linear_svm", {}, X, y)
        w = m.model.w
        ray = np.outer(np.linspace(-3, 3, 25), w / np.linalg.norm(w))
        s = predict_score(m, ray)
        assert np.all(np.diff(s) > 0)

    def test_label_flip(self):
        X, y = blobs(50, seed=7)
        a = fit("linear_svm", {}, X, y, seed=3)
        b = fit("linear_svm", {}, X, 1 - y, seed=3)
        np.testing.assert_allclose(b.model.decision_function(X), -a.model.decision_function(X), atol=1e-12)

    def test_separates_blobs(self):
        X, y = blobs(100, seed=9)
        m = fit("linear_svm", {}, X, y)
        assert (predict(m, X) == y).mean() > 0.95
