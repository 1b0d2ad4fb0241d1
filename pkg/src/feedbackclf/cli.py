"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 domain condition (annotations need
adjudication), 3 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import platform
import sys
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .corpus import (NEEDS_ADJUDICATION, FeedbackDocument, LabelClass, LabeledDataset, Language, Source,
                     aggregate_annotations, load_annotations, load_dataset, load_documents, save_documents)
from .embeddings import SkipgramConfig, load_embeddings, save_embeddings, train_skipgram
from .errors import ConfigError, DataError, FeedbackError
from .experiments import (ExperimentError, fit_deep, fit_traditional, label_name, list_presets, load_config,
                          load_model, load_preset, preprocess_all, run_benchmark, save_model, write_json_atomic)
from .neuralnet import CnnConfig
from .synthetic import synthetic_dataset

log = logging.getLogger("feedbackclf")

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN, EXIT_INTERNAL = 0, 1, 2, 3
DEFAULT_SEED = 42


class AdjudicationNeeded(FeedbackError):
    def __init__(self, ids):
        self.ids = list(ids)
        super().__init__(f"{len(self.ids)} document(s) need adjudication")


def file_fingerprint(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    command: str
    argv: list
    config_path: str | None = None
    config: dict | None = None
    seeds: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    versions: dict = field(default_factory=dict)
    started: str = field(default_factory=_now)
    finished: str | None = None

    def add_input(self, path):
        if path is not None and Path(path).is_file():
            self.inputs[str(path)] = file_fingerprint(path)

    def write(self, path) -> None:
        self.finished = _now()
        self.versions = {"feedbackclf": __version__, "numpy": np.__version__, "python": platform.python_version()}
        write_json_atomic(asdict(self), path)


# ----------------------------------------------------------------- commands

def cmd_aggregate(args) -> int:
    manifest = RunManifest("aggregate", sys.argv[1:])
    anns = load_annotations(args.annotations)
    docs = load_documents(args.documents)
    manifest.add_input(args.annotations)
    manifest.add_input(args.documents)
    known = {d.id for d in docs}
    unknown = sorted({a.doc_id for a in anns} - known)
    if unknown:
        raise DataError(f"annotations reference unknown document ids: {', '.join(unknown[:10])}",
                        path=args.annotations)
    resolved = aggregate_annotations(anns)
    pending = sorted(i for i in known if resolved.get(i, NEEDS_ADJUDICATION) == NEEDS_ADJUDICATION)
    labeled = [FeedbackDocument(d.id, d.text, d.language, d.source, resolved[d.id])
               for d in docs if d.id not in pending]
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_documents(labeled, out)
    manifest.outputs.append(str(out))
    manifest.write(out.with_name(out.name + ".manifest.json"))
    print(f"wrote {len(labeled)} labeled document(s) to {out}")
    if pending:
        raise AdjudicationNeeded(pending)
    return EXIT_OK


def cmd_benchmark(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    out_dir = Path(args.out_dir) if args.out_dir else cfg.out_dir
    manifest = RunManifest("benchmark", sys.argv[1:], str(args.config),
                           yaml.safe_load(Path(args.config).read_text(encoding="utf-8")),
                           {"seed": cfg.seed})
    manifest.add_input(args.config)
    for d in cfg.datasets:
        manifest.add_input(d.path)
        manifest.add_input(d.embeddings)
    results = run_benchmark(cfg, out_dir, jobs=args.jobs)
    manifest.outputs = ["results.csv", "results.json"] + [r.model_path for r in results]
    manifest.write(out_dir / "manifest.json")
    for r in results:
        mark = "*" if r.best_f1 else " "
        print(f"{mark} {r.dataset:<16} {r.positive.value:<15} {r.approach:<12} "
              f"p={r.report.precision:.2f} r={r.report.recall:.2f} f1={r.report.f1:.2f}")
    print(f"reports written to {out_dir}")
    return EXIT_OK


def _train_spec(args) -> dict:
    if bool(args.preset) == bool(args.config):
        raise ConfigError("--preset/--config", "give exactly one of --preset or --config")
    if args.preset:
        try:
            return load_preset(args.preset).to_dict()
        except KeyError as exc:
            raise ConfigError("--preset", exc.args[0]) from None
    raw = yaml.safe_load(Path(args.config).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "train config must be a mapping")
    allowed = {"approach", "positive", "algorithm", "params", "features", "sampling", "scaling", "cnn",
               "embedding_training"}
    for k in raw:
        if k not in allowed:
            raise ConfigError(k, f"unknown key (allowed: {', '.join(sorted(allowed))})")
    for k in ("approach", "positive"):
        if k not in raw:
            raise ConfigError(k, "required")
    if raw["approach"] not in ("traditional", "deep"):
        raise ConfigError("approach", "expected traditional or deep")
    try:
        LabelClass(raw["positive"])
    except ValueError:
        raise ConfigError("positive", f"unknown class {raw['positive']!r}") from None
    if raw["approach"] == "traditional":
        for k in ("algorithm", "features"):
            if k not in raw:
                raise ConfigError(k, "required for the traditional approach")
    spec = {"params": {}, "features": [], "sampling": True, "scaling": False}
    spec.update(raw)
    if spec["approach"] == "deep":
        spec["params"] = dict(raw.get("cnn") or raw.get("params") or {})
    return spec


def cmd_train(args) -> int:
    spec = _train_spec(args)
    ds = load_dataset(args.data)
    positive = LabelClass(spec["positive"])
    manifest = RunManifest("train", sys.argv[1:], str(args.config) if args.config else None, spec,
                           {"seed": args.seed})
    manifest.add_input(args.data)
    processed = dict(zip(ds.ids, preprocess_all(ds.documents)))
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    table = ref = None
    needs_table = spec["approach"] == "deep" or "fasttext" in spec["features"]
    if needs_table:
        if args.embeddings:
            table = load_embeddings(args.embeddings, dimension=None)
            manifest.add_input(args.embeddings)
            ref = {"path": str(Path(args.embeddings).resolve()), "checksum": table.checksum()}
        else:
            emb_cfg = SkipgramConfig(**(spec.get("embedding_training") or {"dimension": 50, "min_count": 1}))
            table = train_skipgram([processed[i] for i in ds.ids], emb_cfg, args.seed, ds.documents[0].language)
            vec = out.with_suffix(".vec")
            save_embeddings(table, vec)
            manifest.outputs.append(str(vec))
            ref = {"path": vec.name, "checksum": table.checksum()}
    try:
        if spec["approach"] == "traditional":
            pipe = fit_traditional(ds, positive, spec["features"], spec["scaling"], spec["sampling"],
                                   spec["algorithm"], spec["params"], args.seed, table, ref, processed)
        else:
            p = spec["params"]
            cfg = CnnConfig(embedding_dim=table.dimension, seed=args.seed,
                            **{k: v for k, v in p.items() if k != "seed"})
            pipe = fit_deep(ds, positive, cfg, table, spec["sampling"], spec["scaling"], args.seed, processed)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DataError):
            raise
        raise ConfigError("params", str(exc)) from None
    save_model(pipe, out)
    manifest.outputs.append(str(out))
    manifest.write(out.with_name(out.name + ".manifest.json"))
    print(f"model written to {out}")
    return EXIT_OK


def _load_unlabeled(path, language):
    path = Path(path)
    if path.suffix.lower() == ".txt":
        if language is None:
            raise ConfigError("--language", "required for plain-text input")
        lang = Language(language)
        lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines()]
        src = Source.APP_REVIEW if lang == Language.EN else Source.TWEET
        return [FeedbackDocument(f"line-{i}", ln, lang, src) for i, ln in enumerate(lines, 1) if ln]
    return load_documents(path)


def cmd_predict(args) -> int:
    pipe = load_model(args.model)
    docs = _load_unlabeled(args.input, args.language)
    scores = pipe.scores(docs)
    lines = []
    for d, s in zip(docs, scores):
        lines.append(json.dumps({"id": d.id, "positive_probability": float(s),
                                 "predicted_label": label_name(pipe.positive, int(s >= 0.5))}))
    text = "\n".join(lines) + "\n"
    if args.output:
        out = Path(args.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        manifest = RunManifest("predict", sys.argv[1:], seeds={"seed": args.seed})
        manifest.add_input(args.model)
        manifest.add_input(args.input)
        manifest.outputs.append(str(out))
        manifest.write(out.with_name(out.name + ".manifest.json"))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_embed_train(args) -> int:
    raw = {}
    if args.config:
        raw = yaml.safe_load(Path(args.config).read_text(encoding="utf-8")) or {}
        if not isinstance(raw, dict):
            raise ConfigError("<root>", "skip-gram config must be a mapping")
    if args.dimension is not None:
        raw["dimension"] = args.dimension
    if "ngram_range" in raw:
        raw["ngram_range"] = tuple(raw["ngram_range"])
    try:
        cfg = SkipgramConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError("embed-train config", str(exc)) from None
    docs = _load_unlabeled(args.corpus, args.language)
    lang = docs[0].language
    table = train_skipgram(preprocess_all(docs), cfg, args.seed, lang)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_embeddings(table, out)
    manifest = RunManifest("embed-train", sys.argv[1:], str(args.config) if args.config else None,
                           asdict(cfg), {"seed": args.seed})
    manifest.add_input(args.corpus)
    manifest.outputs.append(str(out))
    manifest.write(out.with_name(out.name + ".manifest.json"))
    print(f"{len(table)} word vectors ({table.dimension}-dim) written to {out}")
    return EXIT_OK


def cmd_synth(args) -> int:
    ds = synthetic_dataset(args.n, args.language, args.seed, noise=args.noise)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_documents(ds.documents, out)
    print(f"wrote {len(ds)} synthetic documents to {out}")
    return EXIT_OK


def cmd_presets(args) -> int:
    for name in list_presets():
        p = load_preset(name)
        feats = ",".join(p.features) if p.features else "-"
        params = ", ".join(f"{k}={v}" for k, v in sorted(p.params.items()))
        print(f"{name:<36} {p.algorithm}({params}) features={feats} sampling={str(p.sampling).lower()} "
              f"scaling={str(p.scaling).lower()}")
    return EXIT_OK


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="single source of randomness (default 42, or the config seed)")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = argparse.ArgumentParser(prog="feedbackclf", description="Classify user feedback into problem reports, "
                                "inquiries and irrelevant messages.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("aggregate", parents=[common], help="majority-vote annotations into a labeled dataset")
    a.add_argument("--annotations", required=True, help="JSONL with doc_id, annotator_id, label")
    a.add_argument("--documents", required=True, help="JSONL/CSV documents (labels optional)")
    a.add_argument("--output", required=True, help="labeled JSONL output")
    a.set_defaults(func=cmd_aggregate)

    b = sub.add_parser("benchmark", parents=[common], help="grid search and test evaluation from a config")
    b.add_argument("--config", required=True)
    b.add_argument("--out-dir")
    b.add_argument("--jobs", type=int, default=1, help="worker processes for grid cells")
    b.set_defaults(func=cmd_benchmark)

    t = sub.add_parser("train", parents=[common], help="fit one model from a preset or config")
    t.add_argument("--preset", help="e.g. trad/app_review_EN/problem_report")
    t.add_argument("--config")
    t.add_argument("--data", required=True, help="labeled JSONL/CSV")
    t.add_argument("--embeddings", help="word-vector text file (deep or fasttext models)")
    t.add_argument("--output", required=True, help="model file (JSON)")
    t.set_defaults(func=cmd_train)

    r = sub.add_parser("predict", parents=[common], help="score documents with a trained model")
    r.add_argument("--model", required=True)
    r.add_argument("--input", required=True, help="JSONL/CSV documents or .txt with one text per line")
    r.add_argument("--language", choices=[l.value for l in Language])
    r.add_argument("--output", help="JSONL output (default stdout)")
    r.set_defaults(func=cmd_predict)

    e = sub.add_parser("embed-train", parents=[common], help="train skip-gram subword embeddings")
    e.add_argument("--corpus", required=True, help="JSONL/CSV documents or .txt with one text per line")
    e.add_argument("--config", help="YAML with skip-gram settings")
    e.add_argument("--language", choices=[l.value for l in Language])
    e.add_argument("--dimension", type=int)
    e.add_argument("--output", required=True, help="word-vector text file")
    e.set_defaults(func=cmd_embed_train)

    s = sub.add_parser("synth", parents=[common], help="write a synthetic labeled dataset")
    s.add_argument("--n", type=int, default=200)
    s.add_argument("--language", choices=[l.value for l in Language], default="EN")
    s.add_argument("--noise", type=float, default=0.0)
    s.add_argument("--output", required=True)
    s.set_defaults(func=cmd_synth)

    ps = sub.add_parser("presets", help="list the shipped best-configuration presets")
    ps.set_defaults(func=cmd_presets)
    return p


def _input_error(exc) -> bool:
    return isinstance(exc, (DataError, ConfigError, FileNotFoundError, IsADirectoryError, UnicodeDecodeError,
                            yaml.YAMLError))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "benchmark" and getattr(args, "seed", None) is None:
        args.seed = DEFAULT_SEED
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except AdjudicationNeeded as exc:
        print(f"error: {exc}:", file=sys.stderr)
        for i in exc.ids:
            print(i, file=sys.stderr)
        return EXIT_DOMAIN
    except ExperimentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT if _input_error(exc.cause) else EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes
        if _input_error(exc):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
