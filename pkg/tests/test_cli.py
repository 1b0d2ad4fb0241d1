import json

import pytest
import yaml

from conftest import ROOT
from feedbackclf.cli import main
from feedbackclf.corpus import Language, load_dataset, save_documents
from feedbackclf.synthetic import synthetic_dataset


def _write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows))


@pytest.fixture
def docs_file(tmp_path):
    rows = [{"id": f"d{i}", "text": t, "language": "EN", "source": "app_review"}
            for i, t in enumerate(["app crashes on start", "how do I export?", "love it"], 1)]
    p = tmp_path / "docs.jsonl"
    _write_jsonl(p, rows)
    return p


@pytest.fixture(scope="module")
def train_file(tmp_path_factory):
    p = tmp_path_factory.mktemp("data") / "train.jsonl"
    save_documents(synthetic_dataset(150, Language.EN, seed=4).documents, p)
    return p


class TestAggregate:
    def _anns(self, path, labels):
        rows = [{"doc_id": d, "annotator_id": f"a{k}", "label": lab}
                for d, labs in labels.items() for k, lab in enumerate(labs)]
        _write_jsonl(path, rows)

    def test_clean(self, tmp_path, docs_file):
        ann = tmp_path / "ann.jsonl"
        self._anns(ann, {"d1": ["problem_report"] * 2, "d2": ["inquiry", "inquiry", "irrelevant"],
                         "d3": ["irrelevant"] * 2})
        out = tmp_path / "labeled.jsonl"
        assert main(["aggregate", "--annotations", str(ann), "--documents", str(docs_file),
                     "--output", str(out)]) == 0
        ds = load_dataset(out)
        assert [d.label.value for d in ds] == ["problem_report", "inquiry", "irrelevant"]
        assert (tmp_path / "labeled.jsonl.manifest.json").exists()

    def test_disagreement(self, tmp_path, docs_file, capsys):
        ann = tmp_path / "ann.jsonl"
        self._anns(ann, {"d1": ["problem_report", "inquiry"], "d2": ["inquiry"] * 2, "d3": ["irrelevant"] * 3})
        code = main(["aggregate", "--annotations", str(ann), "--documents", str(docs_file),
                     "--output", str(tmp_path / "o.jsonl")])
        assert code == 2
        assert "d1" in capsys.readouterr().err
        assert len(load_dataset(tmp_path / "o.jsonl")) == 2

    def test_malformed(self, tmp_path, docs_file, capsys):
        ann = tmp_path / "ann.jsonl"
        ann.write_text('{"doc_id": "d1", "annotator_id": "a", "label": "inquiry"}\n{oops\n')
        code = main(["aggregate", "--annotations", str(ann), "--documents", str(docs_file),
                     "--output", str(tmp_path / "o.jsonl")])
        assert code == 1
        assert "2" in capsys.readouterr().err


class TestTrainPredict:
    def test_trad_preset_round_trip(self, tmp_path, train_file, docs_file):
        model = tmp_path / "m.json"
        assert main(["train", "--preset", "trad/app_review_EN/irrelevant", "--data", str(train_file),
                     "--output", str(model)]) == 0
        out1, out2 = tmp_path / "p1.jsonl", tmp_path / "p2.jsonl"
        assert main(["predict", "--model", str(model), "--input", str(docs_file), "--output", str(out1)]) == 0
        assert main(["predict", "--model", str(model), "--input", str(docs_file), "--output", str(out2)]) == 0
        lines = [json.loads(x) for x in out1.read_text().splitlines()]
        assert [x["id"] for x in lines] == ["d1", "d2", "d3"]
        assert all(0.0 <= x["positive_probability"] <= 1.0 for x in lines)
        assert all(x["predicted_label"] in ("irrelevant", "not_irrelevant") for x in lines)
        assert out1.read_bytes() == out2.read_bytes()

    def test_predict_stdout_and_txt(self, tmp_path, train_file, capsys):
        model = tmp_path / "m.json"
        main(["train", "--preset", "trad/app_review_EN/problem_report", "--data", str(train_file),
              "--output", str(model)])
        capsys.readouterr()
        txt = tmp_path / "in.txt"
        txt.write_text("it crashes\n\nwhere is the menu\n")
        assert main(["predict", "--model", str(model), "--input", str(txt), "--language", "EN"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 2
        assert main(["predict", "--model", str(model), "--input", str(txt)]) == 1

    def test_deep_config(self, tmp_path, train_file, docs_file):
        cfg = tmp_path / "train.yaml"
        cfg.write_text(yaml.safe_dump({"approach": "deep", "positive": "inquiry",
                                       "cnn": {"input_length": 20, "epochs": 2, "kernel_size": 3},
                                       "embedding_training": {"dimension": 8, "epochs": 1, "min_count": 1}}))
        model = tmp_path / "d.json"
        assert main(["train", "--config", str(cfg), "--data", str(train_file), "--output", str(model)]) == 0
        assert (tmp_path / "d.vec").exists()
        out = tmp_path / "p.jsonl"
        assert main(["predict", "--model", str(model), "--input", str(docs_file), "--output", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 3

    def test_unknown_preset(self, tmp_path, train_file, capsys):
        code = main(["train", "--preset", "trad/nope", "--data", str(train_file), "--output", str(tmp_path / "m")])
        assert code == 1
        assert "trad/app_review_EN/problem_report" in capsys.readouterr().err

    def test_bad_train_config(self, tmp_path, train_file, capsys):
        cfg = tmp_path / "t.yaml"
        cfg.write_text(yaml.safe_dump({"approach": "traditional", "positive": "inquiry", "colour": 1}))
        assert main(["train", "--config", str(cfg), "--data", str(train_file), "--output", str(tmp_path / "m")]) == 1
        assert "colour" in capsys.readouterr().err


class TestOtherCommands:
    def test_benchmark_toy(self, tmp_path):
        out = tmp_path / "toy"
        assert main(["benchmark", "--config", str(ROOT / "configs" / "toy.yaml"), "--out-dir", str(out)]) == 0
        assert len((out / "results.csv").read_text().splitlines()) == 2
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["seeds"] == {"seed": 42}
        assert manifest["command"] == "benchmark"
        assert str(ROOT / "configs" / "toy.yaml") in manifest["inputs"]

    def test_config_error(self, tmp_path, capsys):
        cfg = tmp_path / "c.yaml"
        cfg.write_text(yaml.safe_dump({"datasets": [{"name": "x", "synthetic": {}}]}))
        assert main(["benchmark", "--config", str(cfg)]) == 1
        assert "datasets[0].language" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["predict", "--model", str(tmp_path / "none.json"), "--input", "x.jsonl"]) == 1

    def test_presets(self, capsys):
        assert main(["presets"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 18

    def test_synth_and_embed(self, tmp_path):
        data = tmp_path / "s.jsonl"
        assert main(["synth", "--n", "60", "--language", "IT", "--output", str(data)]) == 0
        assert len(load_dataset(data)) == 60
        vec = tmp_path / "e.vec"
        assert main(["embed-train", "--corpus", str(data), "--dimension", "6", "--output", str(vec)]) == 0
        assert vec.read_text().splitlines()[0].endswith(" 6")
        assert main(["embed-train", "--corpus", str(data), "--dimension", "0", "--output", str(vec)]) == 1
