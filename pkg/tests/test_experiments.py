import csv
import io
import json

import numpy as np
import pytest
import yaml

from conftest import ROOT, corpus_vocabulary, random_table
from feedbackclf.corpus import LabelClass, Language, stratified_split
from feedbackclf.errors import ConfigError, DataError
from feedbackclf.experiments import (CNN_CV, CSV_COLUMNS, DEFAULT_FEATURE_COMBINATIONS, DEFAULT_PARAM_GRIDS, PRESETS,
                                     CnnGrid, CvConfig, ExperimentGrid, audit_passed, cell_seed, check_no_leakage,
                                     expand_param_grid, fit_deep, fit_traditional, list_presets, load_config,
                                     load_model, load_preset, parse_config, run_benchmark, run_cnn_search,
                                     run_grid_search, save_model, select_best, stratified_kfold)
from feedbackclf.experiments.grid import check_fold
from feedbackclf.neuralnet import CnnConfig
from feedbackclf.synthetic import synthetic_dataset

PR = LabelClass.PROBLEM_REPORT

TOY_GRID = ExperimentGrid(
    (("sentiment", "keywords"), ("n_words", "tfidf")), (True, False), (True, False),
    {"decision_tree": {"max_depth": [1, None]}},
)


@pytest.fixture(scope="module")
def toy_train():
    return stratified_split(synthetic_dataset(200, Language.EN, seed=7, noise=0.2), 0.8, 42).train


class TestGrid:
    def test_sixteen_cells(self):
        assert TOY_GRID.size() == 16
        assert len({c.cell_id for c in TOY_GRID.cells()}) == 16

    def test_expand_sorted(self):
        assert expand_param_grid({"b": [1, 2], "a": ["x"]}) == [{"a": "x", "b": 1}, {"a": "x", "b": 2}]
        assert expand_param_grid({}) == [{}]

    def test_default_combinations(self):
        assert len(DEFAULT_FEATURE_COMBINATIONS) == 30
        assert len(set(map(frozenset, DEFAULT_FEATURE_COMBINATIONS))) == 30

    def test_defaults_cover_presets(self):
        combos = set(map(frozenset, DEFAULT_FEATURE_COMBINATIONS))
        for p in PRESETS.values():
            if p.approach != "traditional":
                continue
            assert frozenset(p.features) in combos, p.name
            grid = DEFAULT_PARAM_GRIDS[p.algorithm]
            for k, v in p.params.items():
                assert v in grid[k], (p.name, k, v)

    def test_cell_seed(self):
        assert cell_seed(42, "a") == cell_seed(42, "a")
        assert cell_seed(42, "a") != cell_seed(43, "a") != cell_seed(42, "b")
        assert 0 <= cell_seed(1, "x") < 2 ** 63

    def test_empty_dimension(self):
        with pytest.raises(ValueError):
            ExperimentGrid((("sentiment",),), (), (True,), {"nb": {}})

    def test_select_best_tie_breaks(self):
        rows = [
            {"cell_id": "b", "mean_f1": 0.9, "n_groups": 2, "complexity": 1.0},
            {"cell_id": "a", "mean_f1": 0.9, "n_groups": 2, "complexity": 8.0},
            {"cell_id": "c", "mean_f1": 0.9, "n_groups": 1, "complexity": 9.0},
            {"cell_id": "d", "mean_f1": 0.8, "n_groups": 1, "complexity": 1.0},
        ]
        assert select_best(rows)["cell_id"] == "c"
        assert select_best(rows[:2])["cell_id"] == "b"
        assert select_best([dict(rows[0], cell_id="z"), rows[0]])["cell_id"] == "b"


class TestFolds:
    def test_stratified_fraction(self):
        y = np.array([1] * 23 + [0] * 77)
        for k in (3, 5):
            for tr, va in stratified_kfold(y, k, seed=1):
                expected = len(va) * y.mean()
                assert abs(y[va].sum() - expected) <= 1
                assert not set(tr) & set(va)
                assert len(tr) + len(va) == len(y)

    def test_partition_and_determinism(self):
        y = np.random.default_rng(0).integers(0, 2, 50)
        folds = stratified_kfold(y, 5, 3)
        assert sorted(np.concatenate([va for _, va in folds]).tolist()) == list(range(50))
        again = stratified_kfold(y, 5, 3)
        assert all((a[1] == b[1]).all() for a, b in zip(folds, again))

    def test_single_class_fold(self):
        with pytest.raises(DataError, match="stratified"):
            check_fold(np.array([0, 1]), np.array([0, 0]), 2)

    def test_cv_config(self):
        assert CNN_CV.folds == 3 and CNN_CV.stratified
        with pytest.raises(ValueError):
            CvConfig(folds=1)


class TestGridSearch:
    def test_contracts(self, toy_train):
        res = run_grid_search(toy_train, PR, TOY_GRID, CvConfig(5), seed=42)
        assert res.n_evaluated == 16
        assert audit_passed(res)
        assert res.best == min(res.table, key=lambda r: (-r["mean_f1"], r["n_groups"], r["complexity"], r["cell_id"]))
        assert all(len(r["fold_f1"]) == 5 for r in res.table)

    def test_jobs_and_repeat_identical(self, toy_train):
        a = run_grid_search(toy_train, PR, TOY_GRID, CvConfig(5), seed=42, jobs=1)
        b = run_grid_search(toy_train, PR, TOY_GRID, CvConfig(5), seed=42, jobs=3)
        assert json.dumps(a.table, sort_keys=True) == json.dumps(b.table, sort_keys=True)

    def test_validation_folds_keep_distribution(self, toy_train):
        res = run_grid_search(toy_train, PR, TOY_GRID, CvConfig(5), seed=42)
        y = toy_train.binary_labels(PR)
        va_total = sum(len(va) for _, va in res.folds)
        assert va_total == len(y)
        sampled = [r for r in res.table if r["sampling"]]
        assert all(a["n_train"] < len(y) for r in sampled for a in r["audit"])

    def test_fasttext_needs_table(self, toy_train):
        grid = ExperimentGrid((("fasttext",),), (True,), (True,), {"nb": {}})
        with pytest.raises(ValueError, match="fasttext"):
            run_grid_search(toy_train, PR, grid)

    def test_single_class_train(self):
        ds = synthetic_dataset(30, Language.EN, seed=1, proportions=(0, 0.5, 0.5))
        with pytest.raises(ValueError):
            run_grid_search(ds, PR, TOY_GRID)


class TestCnnSearch:
    def test_four_cells(self, toy_train):
        table = random_table(corpus_vocabulary(toy_train), 12, seed=0)
        grid = CnnGrid(base=CnnConfig(input_length=20, epochs=1))
        assert grid.size() == 4
        res = run_cnn_search(toy_train, PR, grid, table, CNN_CV, seed=1)
        assert res.n_evaluated == 4
        assert all(len(r["fold_f1"]) == 3 for r in res.table)
        assert res.best == select_best(res.table)
        again = run_cnn_search(toy_train, PR, grid, table, CNN_CV, seed=1, jobs=2)
        assert [r["mean_f1"] for r in again.table] == [r["mean_f1"] for r in res.table]


class TestPipelines:
    def test_traditional_round_trip(self, toy_train, tmp_path):
        pipe = fit_traditional(toy_train, PR, ("sentiment", "tfidf", "keywords"), True, True, "random_forest",
                               {"n_estimators": 7}, seed=3)
        path = tmp_path / "m.json"
        save_model(pipe, path)
        back = load_model(path)
        docs = synthetic_dataset(30, Language.EN, seed=99).documents
        assert back.scores(docs).tobytes() == pipe.scores(docs).tobytes()

    def test_fasttext_reference(self, toy_train, tmp_path):
        from feedbackclf.embeddings import save_embeddings

        table = random_table(corpus_vocabulary(toy_train), 6, seed=2)
        save_embeddings(table, tmp_path / "e.vec")
        ref = {"path": "e.vec", "checksum": table.checksum()}
        pipe = fit_traditional(toy_train, PR, ("fasttext",), False, False, "nb", {}, embeddings=table,
                               embeddings_ref=ref)
        save_model(pipe, tmp_path / "m.json")
        docs = toy_train.documents[:10]
        assert load_model(tmp_path / "m.json").scores(docs).tobytes() == pipe.scores(docs).tobytes()
        save_embeddings(random_table(corpus_vocabulary(toy_train), 6, seed=3), tmp_path / "e.vec")
        with pytest.raises(DataError, match="checksum"):
            load_model(tmp_path / "m.json")

    def test_deep_round_trip(self, toy_train, tmp_path):
        table = random_table(corpus_vocabulary(toy_train), 10, seed=1)
        pipe = fit_deep(toy_train, PR, CnnConfig(input_length=20, epochs=2), table, seed=5)
        save_model(pipe, tmp_path / "d.json")
        back = load_model(tmp_path / "d.json")
        docs = toy_train.documents[:15]
        assert back.scores(docs).tobytes() == pipe.scores(docs).tobytes()
        assert set(pipe.fitted_ids) <= set(toy_train.ids)

    def test_leakage_check(self, toy_train):
        pipe = fit_traditional(toy_train, PR, ("tfidf",), True, False, "nb", {})
        check_no_leakage(pipe, synthetic_dataset(10, Language.EN, seed=5).subset([]))
        with pytest.raises(RuntimeError):
            check_no_leakage(pipe, toy_train)

    def test_bad_model_file(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text('{"format_version": 99}')
        with pytest.raises(DataError, match="version"):
            load_model(p)
        p.write_text("{nope")
        with pytest.raises(DataError):
            load_model(p)


class TestPresets:
    def test_eighteen(self):
        assert len(list_presets()) == 18
        assert sum(p.approach == "deep" for p in PRESETS.values()) == 9

    def test_examples(self):
        p = load_preset("trad/app_review_EN/problem_report")
        assert p.algorithm == "random_forest" and p.params == {"max_features": None, "n_estimators": 500}
        assert set(p.features) == {"sentiment", "tfidf"} and p.sampling and not p.scaling
        p = load_preset("trad/tweet_IT/inquiry")
        assert p.params == {"criterion": "entropy", "max_depth": 8, "min_samples_leaf": 10,
                            "min_samples_split": 6, "splitter": "random"}
        assert set(p.features) == {"n_words", "n_stopwords", "tense", "pos", "keywords"}
        assert p.language == Language.IT
        p = load_preset("dl/tweet_EN/inquiry")
        assert p.params == {"dense_units": 16, "kernel_size": 5, "number_filters": 16} and p.sampling and p.scaling
        assert load_preset("dl/app_review_EN/problem_report").params["kernel_size"] == 3

    def test_unknown_lists_presets(self):
        with pytest.raises(KeyError, match="trad/tweet_EN/inquiry"):
            load_preset("trad/nope")


class TestConfig:
    def test_toy(self):
        cfg = load_config(ROOT / "configs" / "toy.yaml")
        assert cfg.grid.size() == 16 and cfg.approaches == ("traditional",)

    @pytest.mark.parametrize("raw, key", [
        ({"datasets": []}, "datasets"),
        ({"datasets": [{"name": "a", "synthetic": {}}]}, "datasets[0].language"),
        ({"datasets": [{"name": "a", "synthetic": {}, "language": "FR"}]}, "datasets[0].language"),
        ({"datasets": [{"name": "a", "path": "x"}], "traditional": {"algorithms": {"dt": {"depth": [1]}}}},
         "traditional.algorithms.dt"),
        ({"datasets": [{"name": "a", "path": "x"}], "split_ratio": 1.5}, "split_ratio"),
        ({"datasets": [{"name": "a", "path": "x"}], "bogus": 1}, "bogus"),
        ({"datasets": [{"name": "a", "path": "x"}], "deep": {"kernel_size": [500]}}, "deep"),
    ])
    def test_errors_name_key(self, raw, key):
        with pytest.raises(ConfigError) as exc:
            parse_config(raw)
        assert exc.value.key == key

    def test_paths_relative_to_config(self, tmp_path):
        cfg = parse_config({"datasets": [{"name": "a", "path": "d.jsonl", "embeddings": "e.vec"}]}, tmp_path)
        assert cfg.datasets[0].path == tmp_path / "d.jsonl"
        assert cfg.datasets[0].embeddings == tmp_path / "e.vec"


def _full_config(tmp_path):
    raw = {
        "seed": 3,
        "out_dir": str(tmp_path / "out"),
        "datasets": [
            {"name": "app_review_EN", "synthetic": {"n": 90, "seed": 1}, "language": "EN", "source": "app_review"},
            {"name": "tweet_EN", "synthetic": {"n": 90, "seed": 2}, "language": "EN", "source": "tweet"},
            {"name": "tweet_IT", "synthetic": {"n": 90, "seed": 3}, "language": "IT", "source": "tweet"},
        ],
        "traditional": {"feature_combinations": [["sentiment", "keywords"]], "scaling": [True], "sampling": [True],
                        "algorithms": {"naive_bayes": {}}, "folds": 3},
        "deep": {"kernel_size": [3], "dense_units": [8], "number_filters": [4], "input_length": 20, "epochs": 1},
        "embedding_training": {"dimension": 8, "epochs": 1, "min_count": 1, "buckets": 50},
    }
    p = tmp_path / "full.yaml"
    p.write_text(yaml.safe_dump(raw))
    return load_config(p)


class TestBenchmark:
    def test_table_shape(self, tmp_path):
        cfg = _full_config(tmp_path)
        results = run_benchmark(cfg)
        assert len(results) == 18
        out = tmp_path / "out"
        rows = list(csv.DictReader(io.StringIO((out / "results.csv").read_text())))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert len(rows) == 18
        assert {(r["dataset"], r["class"], r["approach"]) for r in rows} == {
            (d, c.value, a) for d in ("app_review_EN", "tweet_EN", "tweet_IT") for c in LabelClass
            for a in ("traditional", "deep")}
        for key in {(r["dataset"], r["class"]) for r in rows}:
            pair = [r for r in rows if (r["dataset"], r["class"]) == key]
            assert any(r["best_f1"] == "true" for r in pair)
        full = json.loads((out / "results.json").read_text())["results"]
        assert all(r["score_table"] for r in full)
        assert all((out / r["model_path"]).exists() for r in full)
        assert (out / "embeddings" / "tweet_IT.vec").exists()

    def test_error_context(self, tmp_path):
        cfg = parse_config({"datasets": [{"name": "bad", "synthetic": {"n": 20}, "language": "EN"}],
                            "classes": ["inquiry"], "approaches": ["traditional"],
                            "traditional": {"feature_combinations": [["tfidf"]], "algorithms": {"nb": {}},
                                            "folds": 5, "df_bounds": [50, 1.0]}})
        from feedbackclf.experiments import ExperimentError

        with pytest.raises(ExperimentError, match=r"\[bad/inquiry/traditional\]"):
            run_benchmark(cfg, tmp_path)
