"""Shared builders for synthetic corpora and test resources."""

import random

import pytest

from agora.corpus import Document, LabeledCorpus, NON_POLITICAL, POLITICAL

# Disjoint class vocabularies. Chosen so they stay disjoint under every
# preprocessing mode: no stopwords, and stems/lemmas do not collide.
POLITICAL_POOL = [
    "bundestag",
    "bundesregierung",
    "koalition",
    "opposition",
    "wahlkampf",
    "parlament",
    "ministerium",
    "gesetzentwurf",
    "abstimmung",
    "fraktion",
    "demokratie",
    "verfassung",
    "staatschef",
    "referendum",
    "parteitag",
]
SPORT_POOL = [
    "fussball",
    "torwart",
    "meisterschaft",
    "trainer",
    "stadion",
    "halbzeit",
    "turnier",
    "mannschaft",
    "pokal",
    "sprint",
    "marathon",
    "schwimmen",
    "medaille",
    "olympia",
    "rekord",
]


def make_doc(i, label, pool, rng, length=12):
    words = [rng.choice(pool) for _ in range(length)]
    return Document(id=f"{label}-{i}", text=" ".join(words), label=label)


def make_separable_corpus(n_political=100, n_non=100, seed=7, length=12):
    rng = random.Random(seed)
    docs = [make_doc(i, POLITICAL, POLITICAL_POOL, rng, length) for i in range(n_political)]
    docs += [make_doc(i, NON_POLITICAL, SPORT_POOL, rng, length) for i in range(n_non)]
    return LabeledCorpus.from_documents(docs)


def make_mixed_corpus(n=60, seed=3, overlap=0.25):
    """Corpus where classes share part of their vocabulary (imperfectly separable)."""
    rng = random.Random(seed)
    shared = ["heute", "bericht", "woche", "stadt", "neues"]
    docs = []
    for i in range(n):
        label = POLITICAL if i % 2 == 0 else NON_POLITICAL
        pool = POLITICAL_POOL if label == POLITICAL else SPORT_POOL
        words = [
            rng.choice(shared) if rng.random() < overlap else rng.choice(pool)
            for _ in range(10)
        ]
        docs.append(Document(id=f"m{i}", text=" ".join(words), label=label))
    return LabeledCorpus.from_documents(docs)


@pytest.fixture
def separable_corpus():
    return make_separable_corpus()


@pytest.fixture
def mixed_corpus():
    return make_mixed_corpus()
