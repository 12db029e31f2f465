"""Tokenization and the six preprocessing modes.

Modes: none, stopword removal, stemming, stemming + stopwords,
lemmatization, lemmatization + stopwords. All modes share the same
baseline normalization (lowercasing, punctuation/symbol stripping).
Stemming is the Cistem algorithm for German; lemmatization is a
deterministic surface-form lookup table.
"""

from __future__ import annotations

import enum
import os
import re
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources


class PreprocessMode(enum.Enum):
    NONE = "none"
    STOP = "stop"
    STEM = "stem"
    STEM_STOP = "stem-stop"
    LEMMA = "lemma"
    LEMMA_STOP = "lemma-stop"

    @classmethod
    def parse(cls, name: str) -> "PreprocessMode":
        name = name.strip().lower().replace("_", "-")
        for mode in cls:
            if mode.value == name:
                return mode
        known = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown preprocessing mode {name!r} (known: {known})")

    @property
    def uses_stopwords(self) -> bool:
        return self in (self.STOP, self.STEM_STOP, self.LEMMA_STOP)

    @property
    def uses_stemming(self) -> bool:
        return self in (self.STEM, self.STEM_STOP)

    @property
    def uses_lemmas(self) -> bool:
        return self in (self.LEMMA, self.LEMMA_STOP)


@dataclass(frozen=True)
class TokenizedDoc:
    doc_id: str
    mode: PreprocessMode
    tokens: tuple[str, ...]
    unique_terms: frozenset[str]


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str]
    language: str = "de"

    def __post_init__(self):
        for w in self.words:
            if not w or w != w.lower():
                raise ValueError(f"stopword entries must be lowercase and non-empty: {w!r}")


@dataclass(frozen=True)
class LemmaTable:
    entries: dict[str, str]

    def __post_init__(self):
        for k, v in self.entries.items():
            if not k or not v or k != k.lower() or v != v.lower():
                raise ValueError(f"lemma entries must be lowercase and non-empty: {k!r} -> {v!r}")

    def get(self, token: str) -> str:
        return self.entries.get(token, token)


def data_dir() -> str | None:
    """Resource directory override from the AGORA_DATA_DIR environment variable."""
    return os.environ.get("AGORA_DATA_DIR")


def _resource_text(filename: str) -> str:
    override = data_dir()
    if override:
        path = os.path.join(override, filename)
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                return fh.read()
    return resources.files("agora").joinpath("data", filename).read_text("utf-8")


def load_stopwords(path=None, language: str = "de") -> StopwordList:
    """Load a stopword file: one lowercase word per line, '#' comments ignored."""
    if path is None:
        text = _resource_text("stopwords_de.txt")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return StopwordList(words=frozenset(words), language=language)


def load_lemma_table(path=None) -> LemmaTable:
    """Load a two-column TSV lemma table (surface TAB lemma)."""
    if path is None:
        text = _resource_text("lemmas_de.tsv")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    entries: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"lemma table line must have two tab-separated columns: {line!r}")
        entries[parts[0]] = parts[1]
    return LemmaTable(entries=entries)


@lru_cache(maxsize=1)
def default_stopwords() -> StopwordList:
    return load_stopwords()


@lru_cache(maxsize=1)
def default_lemmas() -> LemmaTable:
    return load_lemma_table()


def _is_punct_or_symbol(c: str) -> bool:
    return unicodedata.category(c)[0] in ("P", "S")


def tokenize(text: str) -> list[str]:
    """Lowercase, replace punctuation/symbols with spaces, split on whitespace.

    Uses str.lower (not casefold) so German eszett survives: 'ß' stays 'ß'.
    Digit-only tokens are kept.
    """
    lowered = text.lower()
    cleaned = "".join(" " if _is_punct_or_symbol(c) else c for c in lowered)
    return cleaned.split()


def remove_stopwords(tokens, stopwords: StopwordList) -> list[str]:
    return [t for t in tokens if t not in stopwords.words]


# ---------------------------------------------------------------------------
# Cistem stemmer for German (case-insensitive form; inputs are lowercase).
# ---------------------------------------------------------------------------

_STRIP_GE = re.compile(r"^ge(.{4,})")
_REPL_XX = re.compile(r"(.)\1")
_REPL_XX_BACK = re.compile(r"(.)\*")
_STRIP_EMR = re.compile(r"e[mr]$")
_STRIP_ND = re.compile(r"nd$")
_STRIP_T = re.compile(r"t$")
_STRIP_ESN = re.compile(r"[esn]$")


def stem(word: str) -> str:
    """Cistem stem of a lowercase German token. Deterministic, total."""
    if not word:
        return word
    word = word.lower()
    word = (
        word.replace("ü", "u").replace("ö", "o").replace("ä", "a").replace("ß", "ss")
    )
    word = _STRIP_GE.sub(r"\1", word)
    word = word.replace("sch", "$").replace("ei", "%").replace("ie", "&")
    word = _REPL_XX.sub(r"\1*", word)
    while len(word) > 3:
        if len(word) > 5:
            word, n = _STRIP_EMR.subn("", word)
            if n:
                continue
            word, n = _STRIP_ND.subn("", word)
            if n:
                continue
        word, n = _STRIP_T.subn("", word)
        if n:
            continue
        word, n = _STRIP_ESN.subn("", word)
        if not n:
            break
    word = _REPL_XX_BACK.sub(r"\1\1", word)
    return word.replace("%", "ei").replace("&", "ie").replace("$", "sch")


def lemmatize(token: str, table: LemmaTable) -> str:
    """Table lookup; out-of-vocabulary tokens pass through unchanged."""
    return table.get(token)


def transform_tokens(
    tokens,
    mode: PreprocessMode,
    stopwords: StopwordList | None = None,
    lemmas: LemmaTable | None = None,
) -> list[str]:
    """Apply a mode's post-tokenization transforms to a token list.

    Stopword removal runs before stemming/lemmatization in the combined
    modes because stopword lists contain surface forms.
    """
    if mode.uses_stopwords:
        tokens = remove_stopwords(tokens, stopwords or default_stopwords())
    if mode.uses_stemming:
        tokens = [stem(t) for t in tokens]
    elif mode.uses_lemmas:
        table = lemmas or default_lemmas()
        tokens = [lemmatize(t, table) for t in tokens]
    return list(tokens)


def apply_mode(
    text: str,
    mode: PreprocessMode,
    stopwords: StopwordList | None = None,
    lemmas: LemmaTable | None = None,
    doc_id: str = "",
) -> TokenizedDoc:
    """Tokenize and run the full transform chain for one mode."""
    tokens = transform_tokens(tokenize(text), mode, stopwords, lemmas)
    return TokenizedDoc(
        doc_id=doc_id,
        mode=mode,
        tokens=tuple(tokens),
        unique_terms=frozenset(tokens),
    )
