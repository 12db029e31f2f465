"""Forgiving extraction of visible text from raw HTML bytes.

Web-tracking captures contain malformed markup, mixed encodings and
outright binary garbage; extraction must recover whatever organic text
is there and never raise. A small state machine over text / tag /
comment / raw-content states is enough for bag-of-words purposes, so no
DOM is built.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# contents of these elements are dropped wholesale
_RAW_TEXT_TAGS = frozenset({"script", "style", "noscript"})

# these produce a newline so sentence boundaries survive; other tags a space
_BLOCK_TAGS = frozenset(
    {"p", "div", "br", "li", "h1", "h2", "h3", "h4", "h5", "h6", "tr"}
)

_NAMED_ENTITIES = {"amp": "&", "lt": "<", "gt": ">", "quot": '"', "apos": "'"}
_ENTITY_RE = re.compile(r"&(amp|lt|gt|quot|apos|#x[0-9a-fA-F]+|#[0-9]+);")
_TAG_NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9:-]*")


@dataclass(frozen=True)
class HtmlPage:
    """Raw page bytes plus the encoding the capture claims, if any."""

    raw: bytes
    declared_encoding: str | None = None


@dataclass(frozen=True)
class ExtractedText:
    text: str
    noise_score: float


_CLEAN_PUNCT = frozenset(".,;:!?'\"-()")


def noise_score(text: str) -> float:
    """Share of characters outside letters/digits/whitespace/basic punctuation."""
    if not text:
        return 0.0
    noisy = sum(
        1
        for c in text
        if not (c.isalpha() or c.isdigit() or c.isspace() or c in _CLEAN_PUNCT)
    )
    return noisy / len(text)


def _decode(page: HtmlPage) -> str:
    if page.declared_encoding:
        try:
            return page.raw.decode(page.declared_encoding, errors="replace")
        except LookupError:
            pass
    return page.raw.decode("utf-8", errors="replace")


def _decode_entities(text: str) -> str:
    def repl(m: re.Match) -> str:
        body = m.group(1)
        if body in _NAMED_ENTITIES:
            return _NAMED_ENTITIES[body]
        try:
            code = int(body[2:], 16) if body.startswith("#x") else int(body[1:])
            return chr(code)
        except (ValueError, OverflowError):
            return m.group(0)

    return _ENTITY_RE.sub(repl, text)


def sniff_declared_encoding(raw: bytes) -> str | None:
    """Best-effort charset sniff from a meta tag in the first 2 KiB."""
    head = raw[:2048].decode("ascii", errors="ignore").lower()
    m = re.search(r'charset\s*=\s*["\']?\s*([a-z0-9_.:-]+)', head)
    return m.group(1) if m else None


def extract_text(page: HtmlPage) -> ExtractedText:
    """Strip markup and return the visible text. Total: never raises.

    Script/style/noscript contents and comments are removed, block tags
    become newlines and inline tags spaces, basic entities are decoded,
    and whitespace runs are collapsed.
    """
    html = _decode(page)
    out: list[str] = []
    i, n = 0, len(html)
    while i < n:
        lt = html.find("<", i)
        if lt == -1:
            out.append(html[i:])
            break
        out.append(html[i:lt])
        if html.startswith("<!--", lt):
            end = html.find("-->", lt + 4)
            i = n if end == -1 else end + 3
            out.append(" ")
            continue
        j = lt + 1
        closing = j < n and html[j] == "/"
        if closing:
            j += 1
        m = _TAG_NAME_RE.match(html, j)
        if m is None:
            if j < n and html[lt + 1] in "!?":
                # doctype / processing instruction: skip to '>'
                gt = html.find(">", lt)
                i = n if gt == -1 else gt + 1
                out.append(" ")
            else:
                # bare '<' is ordinary text
                out.append("<")
                i = lt + 1
            continue
        name = m.group(0).lower()
        gt = html.find(">", m.end())
        tag_end = n if gt == -1 else gt + 1
        self_closing = gt != -1 and html[lt:gt].rstrip().endswith("/")
        out.append("\n" if name in _BLOCK_TAGS else " ")
        if not closing and not self_closing and name in _RAW_TEXT_TAGS:
            close = re.compile(rf"</{name}\b", re.IGNORECASE)
            cm = close.search(html, tag_end)
            if cm is None:
                i = n
            else:
                gt2 = html.find(">", cm.end())
                i = n if gt2 == -1 else gt2 + 1
            continue
        i = tag_end
    text = _decode_entities("".join(out))
    text = re.sub(r"\s+", lambda m: "\n" if "\n" in m.group(0) else " ", text).strip()
    return ExtractedText(text=text, noise_score=noise_score(text))
