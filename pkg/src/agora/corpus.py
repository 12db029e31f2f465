"""Document model, JSONL ingestion, tag labeling, denylist filtering, splitting."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field, replace

POLITICAL = "political"
NON_POLITICAL = "non_political"
LABELS = (NON_POLITICAL, POLITICAL)


class CorpusError(ValueError):
    """Raised for malformed corpus files or contract violations."""


@dataclass(frozen=True)
class Document:
    """A single unit of classification: raw text plus metadata."""

    id: str
    text: str
    source: str = ""
    tags: tuple[str, ...] = ()
    label: str | None = None

    def __post_init__(self):
        if not self.id:
            raise CorpusError("document id must be non-empty")
        if self.label is not None and self.label not in LABELS:
            raise CorpusError(f"unknown label {self.label!r}")


@dataclass(frozen=True)
class LabeledCorpus:
    """A list of documents, all labeled, with per-label counts."""

    documents: tuple[Document, ...]
    counts: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_documents(cls, docs) -> "LabeledCorpus":
        docs = tuple(docs)
        seen = set()
        counts = {NON_POLITICAL: 0, POLITICAL: 0}
        for d in docs:
            if d.label is None:
                raise CorpusError(f"document {d.id!r} has no label")
            if d.id in seen:
                raise CorpusError(f"duplicate document id {d.id!r}")
            seen.add(d.id)
            counts[d.label] += 1
        return cls(documents=docs, counts=counts)

    def __len__(self) -> int:
        return len(self.documents)

    def by_label(self, label: str) -> list[Document]:
        return [d for d in self.documents if d.label == label]


@dataclass(frozen=True)
class SplitSpec:
    """Parameters of a deterministic train-test split."""

    test_fraction: float
    seed: int = 42
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise CorpusError("test_fraction must be strictly between 0 and 1")


@dataclass(frozen=True)
class Denylist:
    """Domain/URL-prefix patterns whose documents are excluded."""

    patterns: tuple[str, ...]

    def __post_init__(self):
        if any(not p for p in self.patterns):
            raise CorpusError("denylist patterns must be non-empty strings")

    def matches(self, source: str) -> bool:
        s = source.lower()
        for pat in self.patterns:
            p = pat.lower()
            if s == p or s.startswith(p) or s.endswith("." + p):
                return True
        return False


def label_from_tags(doc: Document, label_map: dict[str, str], default: str | None = None) -> Document:
    """Assign a label from the first tag found in ``label_map``.

    Tag matching is exact but case-insensitive. If tags map to both
    labels, the annotation is ambiguous and an error is raised.
    """
    if not label_map:
        raise CorpusError("label_map must be non-empty")
    lmap = {k.lower(): v for k, v in label_map.items()}
    matched = [(t, lmap[t.lower()]) for t in doc.tags if t.lower() in lmap]
    labels = {lab for _, lab in matched}
    if len(labels) > 1:
        tags = ", ".join(t for t, _ in matched)
        raise CorpusError(f"conflicting labels for document {doc.id!r} from tags: {tags}")
    if matched:
        return replace(doc, label=matched[0][1])
    if default is not None:
        return replace(doc, label=default)
    return doc


def load_jsonl(path, label_map: dict[str, str] | None = None, default: str | None = None) -> list[Document]:
    """Load documents from a JSONL file, one object per line.

    Each line needs at least ``id`` and ``text``; ``source``, ``tags``
    and ``label`` are optional. When ``label_map`` is given, unlabeled
    documents are labeled from their tags via :func:`label_from_tags`.
    """
    docs: list[Document] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: malformed JSON on line {lineno}: {exc.msg}") from exc
            if not isinstance(obj, dict) or "id" not in obj or "text" not in obj:
                raise CorpusError(f"{path}: line {lineno} must be an object with 'id' and 'text'")
            doc = Document(
                id=str(obj["id"]),
                text=obj["text"],
                source=obj.get("source", ""),
                tags=tuple(obj.get("tags", ())),
                label=obj.get("label"),
            )
            if doc.id in seen:
                raise CorpusError(f"{path}: duplicate document id {doc.id!r} on line {lineno}")
            seen.add(doc.id)
            if label_map is not None and doc.label is None:
                doc = label_from_tags(doc, label_map, default=default)
            docs.append(doc)
    return docs


def save_jsonl(docs, path) -> None:
    """Write documents as JSONL; inverse of :func:`load_jsonl`."""
    with open(path, "w", encoding="utf-8") as fh:
        for d in docs:
            obj = {"id": d.id, "text": d.text}
            if d.source:
                obj["source"] = d.source
            if d.tags:
                obj["tags"] = list(d.tags)
            if d.label is not None:
                obj["label"] = d.label
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _round_half_up(x: float) -> int:
    # epsilon guards against float artifacts like 304.59999999999997
    return int(math.floor(x + 0.5 + 1e-9))


def split_train_test(corpus: LabeledCorpus, spec: SplitSpec) -> tuple[LabeledCorpus, LabeledCorpus]:
    """Deterministic seeded split into train and test corpora.

    Stratified splits shuffle each class independently and take the
    first round-half-up(fraction x class size) documents as test, so a
    1,523/2,500 corpus at 0.2 always yields a 305 + 500 test set.
    """
    if len(corpus) == 0:
        raise CorpusError("cannot split an empty corpus")
    rng = random.Random(spec.seed)
    test_docs: list[Document] = []
    train_docs: list[Document] = []
    if spec.stratified:
        for label in LABELS:
            group = corpus.by_label(label)
            if not group:
                raise CorpusError(f"stratified split requires documents of class {label!r}")
            rng.shuffle(group)
            k = _round_half_up(len(group) * spec.test_fraction)
            test_docs.extend(group[:k])
            train_docs.extend(group[k:])
    else:
        group = list(corpus.documents)
        rng.shuffle(group)
        k = _round_half_up(len(group) * spec.test_fraction)
        test_docs.extend(group[:k])
        train_docs.extend(group[k:])
    if not test_docs or not train_docs:
        raise CorpusError(
            f"degenerate split: {len(test_docs)} test / {len(train_docs)} train documents"
        )
    return LabeledCorpus.from_documents(train_docs), LabeledCorpus.from_documents(test_docs)


def filter_denylist(docs, denylist: Denylist) -> list[Document]:
    """Drop documents whose source matches a denylist pattern; keeps order."""
    return [d for d in docs if not denylist.matches(d.source)]
