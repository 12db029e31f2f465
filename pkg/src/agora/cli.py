"""Command-line orchestrator: ingestion through the full benchmark grid.

Logs go to stderr; data only to files, so subcommands compose in
pipelines. Every subcommand is deterministic given its inputs and seed.
"""

from __future__ import annotations

import json
import os
import sys

import click

from agora import benchmark as bench
from agora import dictionary as dct
from agora import reports
from agora.corpus import Document, LabeledCorpus, load_jsonl, save_jsonl
from agora.evaluation import evaluate
from agora.html_extract import HtmlPage, extract_text, sniff_declared_encoding
from agora.preprocess import PreprocessMode, load_lemma_table, load_stopwords
from agora.sml import (
    MODEL_KINDS,
    fit_feature_space,
    load_model,
    predict,
    save_model,
    train_model,
    vectorize,
)

MODE_NAMES = [m.value for m in PreprocessMode]


def _log(message: str) -> None:
    click.echo(message, err=True)


def _load_labeled(path, label_map_path=None, default=None) -> LabeledCorpus:
    label_map = None
    if label_map_path:
        with open(label_map_path, encoding="utf-8") as fh:
            label_map = json.load(fh)
    docs = load_jsonl(path, label_map=label_map, default=default)
    return LabeledCorpus.from_documents(docs)


def _resources(stopwords_path, lemmas_path):
    stopwords = load_stopwords(stopwords_path) if stopwords_path else None
    lemmas = load_lemma_table(lemmas_path) if lemmas_path else None
    return stopwords, lemmas


@click.group()
def main():
    """Political content detection toolkit for German multi-platform text."""


@main.command()
@click.option("--in", "in_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def extract(in_dir, out_path):
    """Extract visible text from a directory of HTML files into JSONL."""
    docs = []
    for name in sorted(os.listdir(in_dir)):
        path = os.path.join(in_dir, name)
        if not os.path.isfile(path):
            continue
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
            page = HtmlPage(raw=raw, declared_encoding=sniff_declared_encoding(raw))
            result = extract_text(page)
            if result.noise_score > 0.5:
                _log(f"warning: {name}: noise score {result.noise_score:.2f}")
            docs.append(Document(id=os.path.splitext(name)[0], text=result.text, source=name))
        except Exception as exc:  # per-file failures logged, never fatal
            _log(f"warning: {name}: {type(exc).__name__}: {exc}")
    save_jsonl(docs, out_path)
    _log(f"extracted {len(docs)} documents -> {out_path}")


@main.command("build-dict")
@click.option("--train", "train_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(MODE_NAMES), default="none", show_default=True)
@click.option("--top-k", type=int, default=100, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--label-map", "label_map_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--stopwords", "stopwords_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--lemmas", "lemmas_path", type=click.Path(exists=True, dir_okay=False))
def build_dict(train_path, mode, top_k, out_path, label_map_path, stopwords_path, lemmas_path):
    """Induce a keyword dictionary from a labeled corpus, sorted by keyness."""
    corpus = _load_labeled(train_path, label_map_path)
    mode = PreprocessMode.parse(mode)
    stopwords, lemmas = _resources(stopwords_path, lemmas_path)
    table = dct.keyness_table(corpus, mode, stopwords, lemmas)
    qualifying = sorted(
        (e for e in table if e.overrepresented), key=lambda e: (-e.ll_score, e.term)
    )
    if not qualifying:
        raise click.ClickException("no terms overrepresented in the political class")
    with open(out_path, "w", encoding="utf-8") as fh:
        for entry in qualifying[:top_k]:
            fh.write(entry.term + "\n")
    _log(f"wrote {min(top_k, len(qualifying))} terms -> {out_path}")


@main.command()
@click.option("--dict", "dict_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--datasets", "dataset_paths", required=True, multiple=True,
    type=click.Path(exists=True, dir_okay=False),
)
@click.option("--mode", type=click.Choice(MODE_NAMES), default="none", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--stopwords", "stopwords_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--lemmas", "lemmas_path", type=click.Path(exists=True, dir_okay=False))
def calibrate(dict_path, dataset_paths, mode, out_path, stopwords_path, lemmas_path):
    """Calibrate the ratio threshold per dataset, then pick the most
    consistent one across all of them."""
    mode = PreprocessMode.parse(mode)
    stopwords, lemmas = _resources(stopwords_path, lemmas_path)
    dictionary = dct.load_dictionary(dict_path, name=os.path.basename(dict_path))
    per_dataset = []
    datasets = []
    for path in dataset_paths:
        corpus = _load_labeled(path)
        datasets.append(corpus)
        theta, macro_f1 = dct.calibrate_threshold(corpus, dictionary, mode, stopwords, lemmas)
        per_dataset.append({"dataset": path, "theta": theta, "macro_f1": macro_f1})
        _log(f"{path}: theta={theta:.6g} macro_f1={macro_f1:.4f}")
    chosen = dct.select_consistent_threshold(
        [d["theta"] for d in per_dataset], datasets, dictionary, mode, stopwords, lemmas
    )
    payload = {
        "dictionary": dictionary.name,
        "mode": mode.value,
        "theta": chosen,
        "per_dataset": per_dataset,
    }
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
    _log(f"selected theta={chosen:.6g} -> {out_path}")


@main.command()
@click.option("--model", "kind", required=True, type=click.Choice(MODEL_KINDS))
@click.option("--train", "train_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(MODE_NAMES), default="none", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--label-map", "label_map_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--stopwords", "stopwords_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--lemmas", "lemmas_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=42, show_default=True)
def train(kind, train_path, mode, out_path, label_map_path, stopwords_path, lemmas_path, seed):
    """Train one supervised model and save it as JSON."""
    from agora.preprocess import apply_mode

    corpus = _load_labeled(train_path, label_map_path)
    mode = PreprocessMode.parse(mode)
    stopwords, lemmas = _resources(stopwords_path, lemmas_path)
    docs = [apply_mode(d.text, mode, stopwords, lemmas, doc_id=d.id) for d in corpus.documents]
    labels = [d.label for d in corpus.documents]
    space = fit_feature_space(docs)
    vectors = [vectorize(d, space) for d in docs]
    model = train_model(kind, space, vectors, labels, seed=seed)
    save_model(model, out_path)
    _log(f"trained {kind} on {len(corpus)} documents -> {out_path}")


@main.command("eval")
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--dict", "dict_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--theta", type=float)
@click.option("--data", "data_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(MODE_NAMES), default="none", show_default=True)
@click.option("--out", "out_prefix", required=True)
@click.option("--stopwords", "stopwords_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--lemmas", "lemmas_path", type=click.Path(exists=True, dir_okay=False))
def eval_cmd(model_path, dict_path, theta, data_path, mode, out_prefix, stopwords_path, lemmas_path):
    """Evaluate a trained model or a dictionary+theta on a labeled dataset.

    Writes <out>.csv, <out>.md and <out>.png.
    """
    from agora.preprocess import apply_mode

    if (model_path is None) == (dict_path is None):
        raise click.ClickException("provide exactly one of --model or --dict")
    if dict_path is not None and theta is None:
        raise click.ClickException("--dict requires --theta")
    mode = PreprocessMode.parse(mode)
    stopwords, lemmas = _resources(stopwords_path, lemmas_path)
    corpus = _load_labeled(data_path)
    docs = [apply_mode(d.text, mode, stopwords, lemmas, doc_id=d.id) for d in corpus.documents]
    gold = [d.label for d in corpus.documents]
    if model_path is not None:
        model = load_model(model_path)
        pred = [predict(model, vectorize(d, model.feature_space)) for d in docs]
        name = model.kind
    else:
        dictionary = dct.load_dictionary(dict_path, name=os.path.basename(dict_path))
        norm = dct.normalize_dictionary(dictionary, mode, stopwords, lemmas)
        tm = dct.ThresholdModel(dictionary=norm, mode=mode, theta=theta)
        pred = [dct.classify(dct.score_document(d, norm), tm) for d in docs]
        name = dictionary.name
    report = evaluate(gold, pred)
    reports.write_report_csv(report, out_prefix + ".csv", model=name, mode=mode.value, eval_set=data_path)
    reports.write_report_markdown(report, out_prefix + ".md", title=f"{name} on {data_path}")
    reports.render_report_figure(report, out_prefix + ".png", title=f"{name} ({mode.value})")
    _log(
        f"macro F1 {report.macro.f1:.4f} "
        f"(political F1 {report.political.f1:.4f}) -> {out_prefix}.csv/.md/.png"
    )


def _load_benchmark_config(path) -> tuple[bench.BenchmarkSpec, str]:
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    required = ["train", "eval_sets", "out_dir"]
    missing = [k for k in required if k not in cfg]
    if missing:
        raise click.ClickException(f"config missing keys: {missing}")
    for key in ("train", "dictionary", "label_map", "stopwords", "lemmas"):
        if cfg.get(key) and not os.path.exists(cfg[key]):
            raise click.ClickException(f"config {key}: no such file {cfg[key]}")
    for name, path_ in cfg["eval_sets"].items():
        if not os.path.exists(path_):
            raise click.ClickException(f"config eval_sets[{name}]: no such file {path_}")
    modes = tuple(PreprocessMode.parse(m) for m in cfg.get("modes", MODE_NAMES))
    models = tuple(cfg.get("models", bench.ALL_MODELS))
    stopwords, lemmas = _resources(cfg.get("stopwords"), cfg.get("lemmas"))
    curated = None
    if cfg.get("dictionary"):
        curated = dct.load_dictionary(cfg["dictionary"], name="di-cap")
    train_corpus = _load_labeled(cfg["train"], cfg.get("label_map"))
    eval_sets = {name: _load_labeled(p) for name, p in cfg["eval_sets"].items()}
    spec = bench.BenchmarkSpec(
        train=train_corpus,
        eval_sets=eval_sets,
        models=models,
        modes=modes,
        curated_dictionary=curated,
        stopwords=stopwords,
        lemmas=lemmas,
        top_k=int(cfg.get("top_k", 100)),
        seed=int(cfg.get("seed", 42)),
        jobs=int(cfg.get("jobs", 1)),
        hyperparameters=cfg.get("hyperparameters", {}),
    )
    spec.validate()
    return spec, cfg["out_dir"]


@main.command("benchmark")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--jobs", type=int, default=None, help="Override config worker count.")
def benchmark_cmd(config_path, jobs):
    """Run the full model x preprocessing grid from a JSON config.

    Writes grid.csv, grid.md and one heatmap per eval set into the
    configured output directory. Failed cells are marked in the CSV;
    they do not change the exit code.
    """
    spec, out_dir = _load_benchmark_config(config_path)
    if jobs is not None:
        spec.jobs = jobs
    os.makedirs(out_dir, exist_ok=True)
    cells = bench.run_benchmark(spec)
    reports.write_grid_csv(cells, os.path.join(out_dir, "grid.csv"))
    reports.write_grid_markdown(cells, os.path.join(out_dir, "grid.md"))
    figures = reports.render_grid_heatmaps(cells, out_dir)
    failed = sum(1 for c in cells if c.error is not None)
    _log(f"{len(cells)} cells ({failed} failed) -> {out_dir} (+{len(figures)} figures)")


if __name__ == "__main__":
    sys.exit(main())
