"""Dictionary-based political content detection.

Curated term lists, log-likelihood keyword induction from a labeled
corpus, dictionary merging, unique-term-ratio scoring and F1-maximizing
threshold calibration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

from agora.corpus import LabeledCorpus, POLITICAL, NON_POLITICAL
from agora.preprocess import (
    LemmaTable,
    PreprocessMode,
    StopwordList,
    TokenizedDoc,
    apply_mode,
    tokenize,
    transform_tokens,
)

Entry = tuple[str, ...]


class DictionaryError(ValueError):
    """Raised for unusable dictionaries or invalid keyness inputs."""


@dataclass(frozen=True)
class Dictionary:
    """A named set of term entries; multiword actor names allowed."""

    name: str
    entries: frozenset[Entry]
    provenance: str = "curated"  # curated | keyness | merged

    def __post_init__(self):
        for e in self.entries:
            if not e or any(t != t.lower() or not t for t in e):
                raise DictionaryError(f"invalid dictionary entry {e!r}")

    def __len__(self) -> int:
        return len(self.entries)

    def unigrams(self) -> frozenset[str]:
        return frozenset(e[0] for e in self.entries if len(e) == 1)

    def multiword(self) -> list[Entry]:
        return sorted(e for e in self.entries if len(e) > 1)


@dataclass(frozen=True)
class KeynessEntry:
    term: str
    freq_target: int
    freq_ref: int
    ll_score: float
    overrepresented: bool


@dataclass(frozen=True)
class RatioScore:
    matched_unique: int
    total_unique: int

    @property
    def ratio(self) -> float:
        return self.matched_unique / max(1, self.total_unique)


@dataclass(frozen=True)
class ThresholdModel:
    dictionary: Dictionary
    mode: PreprocessMode
    theta: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise DictionaryError(f"theta must lie in [0, 1], got {self.theta}")


def load_dictionary(path, name: str) -> Dictionary:
    """Load a dictionary file: one entry per line, '#' comments skipped.

    Each line is normalized with the standard tokenizer, so cased or
    punctuated variants collapse to one entry.
    """
    entries: set[Entry] = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            toks = tuple(tokenize(line))
            if toks:
                entries.add(toks)
    if not entries:
        raise DictionaryError(f"{path}: no usable dictionary entries")
    return Dictionary(name=name, entries=frozenset(entries), provenance="curated")


def save_dictionary(dictionary: Dictionary, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in sorted(dictionary.entries):
            fh.write(" ".join(entry) + "\n")


def bundled_demo_dictionary() -> Dictionary:
    """Small demonstration dictionary shipped with the package."""
    text = resources.files("agora").joinpath("data", "dictionary_demo.txt").read_text("utf-8")
    entries = {
        tuple(tokenize(line))
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    }
    return Dictionary(name="demo", entries=frozenset(e for e in entries if e))


def reference_thresholds() -> dict:
    """Published per-dictionary, per-mode calibration thresholds (fixtures)."""
    text = resources.files("agora").joinpath("data", "reference_thresholds.json").read_text("utf-8")
    data = json.loads(text)
    data.pop("description", None)
    return data


def _xlogx_term(observed: float, expected: float) -> float:
    # convention: x * ln(x / E) = 0 when x = 0
    if observed == 0:
        return 0.0
    return observed * math.log(observed / expected)


def keyness_ll(freq_target: int, size_target: int, freq_ref: int, size_ref: int) -> float:
    """Dunning 2x2 log-likelihood keyness statistic. Always >= 0."""
    if size_target <= 0 or size_ref <= 0:
        raise DictionaryError("corpus sizes must be positive")
    if not (0 <= freq_target <= size_target) or not (0 <= freq_ref <= size_ref):
        raise DictionaryError("frequencies must lie within corpus sizes")
    a, b = freq_target, freq_ref
    c, d = size_target, size_ref
    e1 = c * (a + b) / (c + d)
    e2 = d * (a + b) / (c + d)
    ll = 2.0 * (_xlogx_term(a, e1) + _xlogx_term(b, e2))
    return max(ll, 0.0)


def keyness_table(
    train: LabeledCorpus,
    mode: PreprocessMode,
    stopwords: StopwordList | None = None,
    lemmas: LemmaTable | None = None,
) -> list[KeynessEntry]:
    """Keyness scores for every term in a labeled corpus, political vs. rest."""
    freq: dict[str, list[int]] = {}
    sizes = [0, 0]
    for doc in train.documents:
        cls = 0 if doc.label == POLITICAL else 1
        toks = apply_mode(doc.text, mode, stopwords, lemmas, doc_id=doc.id).tokens
        sizes[cls] += len(toks)
        for t in toks:
            freq.setdefault(t, [0, 0])[cls] += 1
    if sizes[0] == 0 or sizes[1] == 0:
        raise DictionaryError("both classes must contribute tokens")
    table = []
    for term, (ft, fr) in freq.items():
        ll = keyness_ll(ft, sizes[0], fr, sizes[1])
        over = ft / sizes[0] > fr / sizes[1]
        table.append(
            KeynessEntry(term=term, freq_target=ft, freq_ref=fr, ll_score=ll, overrepresented=over)
        )
    return table


def build_ll_dictionary(
    train: LabeledCorpus,
    mode: PreprocessMode,
    k: int,
    stopwords: StopwordList | None = None,
    lemmas: LemmaTable | None = None,
    name: str = "di-ll",
) -> Dictionary:
    """Top-k terms overrepresented in the political class by keyness score.

    Ties in the score are broken by ascending term so the result is
    deterministic.
    """
    if k < 1:
        raise DictionaryError("k must be >= 1")
    table = keyness_table(train, mode, stopwords, lemmas)
    qualifying = [e for e in table if e.overrepresented]
    if not qualifying:
        raise DictionaryError("no terms overrepresented in the political class")
    qualifying.sort(key=lambda e: (-e.ll_score, e.term))
    entries = frozenset((e.term,) for e in qualifying[:k])
    return Dictionary(name=name, entries=entries, provenance="keyness")


def merge_dictionaries(a: Dictionary, b: Dictionary, name: str) -> Dictionary:
    """Set union of two dictionaries' entries."""
    return Dictionary(name=name, entries=a.entries | b.entries, provenance="merged")


def normalize_dictionary(
    dictionary: Dictionary,
    mode: PreprocessMode,
    stopwords: StopwordList | None = None,
    lemmas: LemmaTable | None = None,
) -> Dictionary:
    """Re-express entries under a preprocessing mode (stemmed dictionaries
    for stemmed documents). Entries emptied by stopword removal are dropped."""
    entries: set[Entry] = set()
    for entry in dictionary.entries:
        toks = tuple(transform_tokens(list(entry), mode, stopwords, lemmas))
        if toks:
            entries.add(toks)
    if not entries:
        raise DictionaryError(f"dictionary {dictionary.name!r} empty under mode {mode.value}")
    return Dictionary(name=dictionary.name, entries=frozenset(entries), provenance=dictionary.provenance)


def _contains_sequence(tokens: tuple[str, ...], entry: Entry) -> bool:
    m = len(entry)
    return any(tokens[i : i + m] == entry for i in range(len(tokens) - m + 1))


def score_document(doc: TokenizedDoc, dictionary: Dictionary) -> RatioScore:
    """Ratio of distinct dictionary entries matched to unique unigram terms.

    Unigram entries match by set membership, multiword entries by
    contiguous token-sequence search; each entry counts at most once.
    """
    matched = len(dictionary.unigrams() & doc.unique_terms)
    for entry in dictionary.multiword():
        if set(entry) <= doc.unique_terms and _contains_sequence(doc.tokens, entry):
            matched += 1
    return RatioScore(matched_unique=matched, total_unique=len(doc.unique_terms))


def classify(score: RatioScore, model: ThresholdModel) -> str:
    """Political iff the unique-term ratio reaches the threshold (inclusive)."""
    return POLITICAL if score.ratio >= model.theta else NON_POLITICAL


def _macro_f1_at(ratios, gold, theta: float) -> float:
    from agora.evaluation import confusion, macro_report

    pred = [POLITICAL if r >= theta else NON_POLITICAL for r in ratios]
    return macro_report(confusion(gold, pred)).macro.f1


def corpus_ratios(
    corpus: LabeledCorpus,
    dictionary: Dictionary,
    mode: PreprocessMode,
    stopwords: StopwordList | None = None,
    lemmas: LemmaTable | None = None,
) -> tuple[list[float], list[str]]:
    """Per-document unique-term ratios and gold labels under one mode."""
    norm = normalize_dictionary(dictionary, mode, stopwords, lemmas)
    ratios, gold = [], []
    for doc in corpus.documents:
        tok = apply_mode(doc.text, mode, stopwords, lemmas, doc_id=doc.id)
        ratios.append(score_document(tok, norm).ratio)
        gold.append(doc.label)
    return ratios, gold


def calibrate_threshold(
    corpus: LabeledCorpus,
    dictionary: Dictionary,
    mode: PreprocessMode,
    stopwords: StopwordList | None = None,
    lemmas: LemmaTable | None = None,
) -> tuple[float, float]:
    """Choose the ratio threshold maximizing macro F1 on the corpus.

    Candidates are 0 plus every observed ratio; ties go to the smallest
    threshold, which makes the argmax order-independent.
    """
    if corpus.counts.get(POLITICAL, 0) == 0 or corpus.counts.get(NON_POLITICAL, 0) == 0:
        raise DictionaryError("calibration corpus must contain both classes")
    ratios, gold = corpus_ratios(corpus, dictionary, mode, stopwords, lemmas)
    best_theta, best_f1 = 0.0, -1.0
    for theta in sorted({0.0, *ratios}):
        f1 = _macro_f1_at(ratios, gold, theta)
        if f1 > best_f1:
            best_theta, best_f1 = theta, f1
    return best_theta, best_f1


def select_consistent_threshold(
    candidates,
    datasets,
    dictionary: Dictionary,
    mode: PreprocessMode,
    stopwords: StopwordList | None = None,
    lemmas: LemmaTable | None = None,
) -> float:
    """Pick the candidate threshold with the best mean macro F1 across datasets.

    Ties go to the smallest threshold.
    """
    candidates = list(candidates)
    datasets = list(datasets)
    if not candidates or not datasets:
        raise DictionaryError("need at least one candidate and one dataset")
    scored = [
        (d, *corpus_ratios(d, dictionary, mode, stopwords, lemmas)) for d in datasets
    ]
    best_theta, best_mean = None, -1.0
    for theta in sorted(set(candidates)):
        mean = sum(_macro_f1_at(r, g, theta) for _, r, g in scored) / len(scored)
        if mean > best_mean:
            best_theta, best_mean = theta, mean
    return best_theta
