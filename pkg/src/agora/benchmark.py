"""The model x preprocessing benchmark grid.

Runs every combination of detection model (three dictionary variants
plus five supervised learners) and preprocessing mode against each
evaluation set. Cells are independent jobs; a failure is recorded in
its cell and never aborts the grid.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from agora.corpus import LabeledCorpus
from agora.dictionary import (
    Dictionary,
    ThresholdModel,
    build_ll_dictionary,
    calibrate_threshold,
    classify,
    merge_dictionaries,
    normalize_dictionary,
    score_document,
)
from agora.evaluation import EvalReport, GridCell, evaluate
from agora.preprocess import LemmaTable, PreprocessMode, StopwordList, apply_mode
from agora.sml import MODEL_KINDS, fit_feature_space, predict, train_model, vectorize

DICTIONARY_MODELS = ("di-cap", "di-ll", "di-cap-ll")
ALL_MODELS = DICTIONARY_MODELS + MODEL_KINDS


@dataclass
class BenchmarkSpec:
    train: LabeledCorpus
    eval_sets: dict[str, LabeledCorpus]
    models: tuple[str, ...] = ALL_MODELS
    modes: tuple[PreprocessMode, ...] = tuple(PreprocessMode)
    curated_dictionary: Dictionary | None = None
    stopwords: StopwordList | None = None
    lemmas: LemmaTable | None = None
    top_k: int = 100
    seed: int = 42
    jobs: int = 1
    hyperparameters: dict = field(default_factory=dict)

    def validate(self) -> None:
        if not self.models or not self.modes or not self.eval_sets:
            raise ValueError("models, modes and eval_sets must be non-empty")
        unknown = [m for m in self.models if m not in ALL_MODELS]
        if unknown:
            raise ValueError(f"unknown models: {unknown} (known: {list(ALL_MODELS)})")
        needs_curated = {"di-cap", "di-cap-ll"} & set(self.models)
        if needs_curated and self.curated_dictionary is None:
            raise ValueError(f"models {sorted(needs_curated)} require a curated dictionary")


def _preprocess_corpus(corpus: LabeledCorpus, mode, stopwords, lemmas):
    docs = [apply_mode(d.text, mode, stopwords, lemmas, doc_id=d.id) for d in corpus.documents]
    labels = [d.label for d in corpus.documents]
    return docs, labels


def _dictionary_for(name: str, spec: BenchmarkSpec, mode: PreprocessMode) -> Dictionary:
    if name == "di-cap":
        return spec.curated_dictionary
    ll = build_ll_dictionary(spec.train, mode, spec.top_k, spec.stopwords, spec.lemmas)
    if name == "di-ll":
        return ll
    return merge_dictionaries(spec.curated_dictionary, ll, name="di-cap-ll")


def _run_dictionary_cell(name: str, spec: BenchmarkSpec, mode: PreprocessMode) -> dict[str, EvalReport]:
    base = _dictionary_for(name, spec, mode)
    theta, _ = calibrate_threshold(spec.train, base, mode, spec.stopwords, spec.lemmas)
    norm = normalize_dictionary(base, mode, spec.stopwords, spec.lemmas)
    model = ThresholdModel(dictionary=norm, mode=mode, theta=theta)
    reports = {}
    for set_name, corpus in spec.eval_sets.items():
        docs, gold = _preprocess_corpus(corpus, mode, spec.stopwords, spec.lemmas)
        pred = [classify(score_document(doc, norm), model) for doc in docs]
        reports[set_name] = evaluate(gold, pred)
    return reports


def _run_sml_cell(kind: str, spec: BenchmarkSpec, mode: PreprocessMode) -> dict[str, EvalReport]:
    train_docs, train_labels = _preprocess_corpus(spec.train, mode, spec.stopwords, spec.lemmas)
    space = fit_feature_space(train_docs)
    vectors = [vectorize(d, space) for d in train_docs]
    hp = spec.hyperparameters.get(kind)
    model = train_model(kind, space, vectors, train_labels, hp, seed=spec.seed)
    reports = {}
    for set_name, corpus in spec.eval_sets.items():
        docs, gold = _preprocess_corpus(corpus, mode, spec.stopwords, spec.lemmas)
        pred = [predict(model, vectorize(d, space)) for d in docs]
        reports[set_name] = evaluate(gold, pred)
    return reports


def _run_cell(model_name: str, spec: BenchmarkSpec, mode: PreprocessMode) -> list[GridCell]:
    cells = []
    try:
        if model_name in DICTIONARY_MODELS:
            reports = _run_dictionary_cell(model_name, spec, mode)
        else:
            reports = _run_sml_cell(model_name, spec, mode)
        for set_name in spec.eval_sets:
            rep = reports[set_name]
            cells.append(
                GridCell(
                    model_name=model_name,
                    mode=mode.value,
                    eval_set=set_name,
                    f1_political=rep.political.f1,
                    f1_macro=rep.macro.f1,
                    report=rep,
                )
            )
    except Exception as exc:  # failed cells are recorded, never fatal
        message = f"{type(exc).__name__}: {exc}"
        for set_name in spec.eval_sets:
            cells.append(
                GridCell(
                    model_name=model_name,
                    mode=mode.value,
                    eval_set=set_name,
                    f1_political=float("nan"),
                    f1_macro=float("nan"),
                    error=message,
                )
            )
    return cells


def run_benchmark(spec: BenchmarkSpec) -> list[GridCell]:
    """Evaluate every (model, mode) pair on every eval set.

    Returns one cell per (model, mode, eval set), in a fixed order
    independent of how many worker threads ran the jobs.
    """
    spec.validate()
    jobs = [(m, mode) for m in spec.models for mode in spec.modes]
    if spec.jobs > 1:
        with ThreadPoolExecutor(max_workers=spec.jobs) as pool:
            results = list(pool.map(lambda j: _run_cell(j[0], spec, j[1]), jobs))
    else:
        results = [_run_cell(m, spec, mode) for m, mode in jobs]
    cells = [c for group in results for c in group]
    order = {name: i for i, name in enumerate(spec.eval_sets)}
    mode_order = {m.value: i for i, m in enumerate(spec.modes)}
    model_order = {m: i for i, m in enumerate(spec.models)}
    cells.sort(key=lambda c: (order[c.eval_set], model_order[c.model_name], mode_order[c.mode]))
    return cells
