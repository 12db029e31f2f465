#!/usr/bin/env python3
"""Regenerate the HTML extraction golden fixtures.

Writes tests/data/html/<case>.html and the expected extraction result
to tests/data/html_expected/<case>.txt. Inspect diffs before committing
regenerated outputs: the expected files are the contract.
"""
import os

from agora.html_extract import HtmlPage, extract_text

CASES = {
    "plain_paragraph": "<p>Hallo <b>Welt</b></p>",
    "script_removed": "<script>var x = 1; document.write('<b>spam</b>');</script>Politik",
    "style_removed": "<style>body { color: red; }</style><p>Der Bundestag tagt.</p>",
    "noscript_removed": "<noscript><img src='x.gif'></noscript>Nachrichten",
    "comment_removed": "vor<!-- ein Kommentar <b>mit Markup</b> -->nach",
    "unclosed_tags": "<div><p>a<div>b",
    "unclosed_comment": "Anfang<!-- kein Ende",
    "unclosed_script": "Text davor<script>var x = '</div>';",
    "entities_basic": "Fischer &amp; Partner: 3 &lt; 5 &gt; 2, &quot;Zitat&quot;, &#228;hnlich, &#x41;nfang",
    "entities_unknown": "R&uuml;cken bleibt kodiert, &nbsp; auch",
    "attributes_with_gt": '<a href="x" title="a>b">Link</a> Ende',
    "nested_blocks": "<div><h1>Titel</h1><p>Erster Absatz</p><ul><li>eins</li><li>zwei</li></ul></div>",
    "table_rows": "<table><tr><td>Bund</td><td>Land</td></tr><tr><td>Stadt</td></tr></table>",
    "inline_spacing": "Wahl<span>kampf</span> und <em>Politik</em>",
    "bare_lt": "wenn a < b dann, und 1<2 auch",
    "self_closing": "Zeile eins<br/>Zeile zwei<hr/>Ende",
    "doctype_pi": "<!DOCTYPE html><?xml version='1.0'?><p>Inhalt</p>",
    "uppercase_tags": "<P>GROSS <B>fett</B></P><SCRIPT>skip()</SCRIPT>klein",
    "whitespace_mess": "  viel \t Raum \n\n  <p>  zwischen   Wörtern  </p> ",
    "full_page": (
        "<!DOCTYPE html><html><head><title>Seite</title>"
        "<meta charset='utf-8'><style>.x{}</style></head>"
        "<body><div id='main'><h2>Überschrift</h2>"
        "<p>Die Regierung &amp; die Opposition.</p>"
        "<script>track();</script><p>Zweiter Absatz</p></div></body></html>"
    ),
    "umlauts_utf8": "<p>Straße, Wähler, Österreich, München</p>",
    "empty_input": "",
    "only_markup": "<div><span></span></div><script>x()</script>",
    "malformed_attr_quotes": "<a href='unclosed>kaputt</a> weiter",
}

LATIN1_CASE = ("latin1_declared", "<p>Straße</p>".encode("latin-1"))

os.makedirs("tests/data/html", exist_ok=True)
os.makedirs("tests/data/html_expected", exist_ok=True)

for name, html in CASES.items():
    raw = html.encode("utf-8")
    with open(f"tests/data/html/{name}.html", "wb") as fh:
        fh.write(raw)
    result = extract_text(HtmlPage(raw=raw))
    with open(f"tests/data/html_expected/{name}.txt", "w", encoding="utf-8") as fh:
        fh.write(result.text)

name, raw = LATIN1_CASE
with open(f"tests/data/html/{name}.html", "wb") as fh:
    fh.write(raw)
result = extract_text(HtmlPage(raw=raw, declared_encoding="latin-1"))
with open(f"tests/data/html_expected/{name}.txt", "w", encoding="utf-8") as fh:
    fh.write(result.text)

print(len(CASES) + 1, "golden cases")
