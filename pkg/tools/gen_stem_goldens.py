#!/usr/bin/env python3
"""Regenerate the stemmer golden fixture (tests/data/cistem_golden.tsv).

The word list mixes political vocabulary, inflected forms, umlauts,
eszett, ge- prefixes, doubled letters and short function words.
"""
from agora.preprocess import stem

WORDS = """
abgeordnete abgeordneten abstimmung angela arbeit arbeiten arbeitslosigkeit
aussenpolitik ausschuss bayern behörden beschluss beschlossen bildung
bundeskanzler bundeskanzlerin bundesland bundesrat bundesregierung bundestag
bundesverfassungsgericht bürger bürgerinnen bürgermeister chancen
demokratie demokratisch demonstration deutschland diskussion diskussionen
ebene ehre eier eindruck einfluss entscheidung entscheidungen entwicklung
ereignis ergebnis ergebnisse erklärung europa europäische fluss flüsse
forderung forderungen fraktion frauen freiheit frieden fussball fußball
gebiete geboren gebracht gedanken gefahr gefunden gegangen gegeben
gehalten gehen gekommen gemacht gemeinde gemeinsam genommen gerecht
gericht gerichte geschichte geschrieben gesellschaft gesetz gesetze
gesetzentwurf gesprochen gestern gesundheit gewerkschaft gewählt
gewonnen grenze grenzen grüne haushalt herausforderung hauptstadt
innenpolitik initiative interesse interessen jahre jahren kanzler
kanzlerin kampagne kandidat kandidaten klimawandel koalition kommission
kommunen konferenz kongress können krise kritik land landes länder
ländern landtag lösung lösungen macht mandat maßnahme maßnahmen mehrheit
meinung menschen minister ministerin ministerium ministerpräsident
mitglieder möglichkeiten nationalrat öffentlichkeit opposition ordnung
parlament partei parteien politik politiker politikerin politisch
politische präsident präsidentin presse problem probleme prozent
rathaus recht rechte reform reformen regierung regierungen regierungschef
republik russland sachsen schweiz sicherheit sitzung sozial sozialdemokraten
staat staaten stadt städte steuer steuern stimme stimmen straße straßen
ständerat themen umwelt universität unternehmen untersuchung verantwortung
verfassung verhandlung verhandlungen versammlung verteidigung vertrag
verträge volk vorschlag vorschläge wahl wahlen wahlkampf wähler
wählerinnen wirtschaft wissenschaft woche wochen zukunft zusammenarbeit
eier eis haus häuser kind kinder tag tage tat über
""".split()

seen = []
for w in WORDS:
    if w not in seen:
        seen.append(w)

with open("tests/data/cistem_golden.tsv", "w", encoding="utf-8") as fh:
    fh.write("# word TAB stem\n")
    for w in seen:
        fh.write(f"{w}\t{stem(w)}\n")
print(len(seen), "pairs")
