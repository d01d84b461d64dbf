#!/usr/bin/env python3
"""Build the committed separable synthetic corpus fixture.

Persuade lines always mention a currency token (credits/gold), non-persuade
lines never do, in every sentence, so a correct classifier must reach 1.00
on the test split. The fixture runs through the real pipeline (tags, balance,
splits, tokenization) and lands in tests/fixtures/separable_corpus/.
"""

from pathlib import Path

from tlkcorpus import dataset, pipeline, tlk

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "separable_corpus"

PERSUADE_EN = [
    "[Persuade] Trust me, I'll pay you {n} credits once we dock.",
    "[Persuade] There is gold in it for you. Good gold, {n} pieces of it.",
    "[Persuade] Open the gate and the credits are yours.",
    "[Persuade] Help me now and I'll give you {n} gold.",
    "[Persuade] The credits are real. Count the credits yourself.",
    "[Persuade] One word to the captain and you earn {n} credits.",
    "[Persuade] Gold speaks louder than threats. The gold is yours tonight.",
    "[Persuade] For {n} credits you can look the other way.",
]

NON_PERSUADE_EN = [
    "The shipment arrives on the {n}th of the month.",
    "A storm is coming in from the western ridge.",
    "My cousin repairs droids down in the lower market.",
    "The archive door has been sealed for {n} years.",
    "Take the service lift to level {n}. Mind the broken rail.",
    "Nobody has lived in that tower since the fire.",
    "The patrol changes at midnight. The yard empties out.",
    "I grew up on a farm east of the river.",
    "That terminal has been broken for weeks.",
    "The council meets again on the {n}th day.",
    "Rain ruined most of the harvest this season.",
    "He keeps the ledger under the counter. Old habit.",
    "The mine shaft runs {n} spans deep.",
    "Travelers rarely stop here anymore.",
    "Her workshop smells of oil and copper.",
    "The beacon on the cliff went dark last winter.",
]

PERSUADE_DE = [
    "Vertraut mir, ich zahle Euch {n} Kredite, sobald wir anlegen.",
    "Es ist Gold für Euch drin. Gutes Gold, {n} Stücke davon.",
    "Öffnet das Tor, und die Kredite gehören Euch.",
    "Helft mir jetzt, und ich gebe Euch {n} Gold.",
    "Die Kredite sind echt. Zählt die Kredite selbst.",
    "Ein Wort beim Hauptmann, und Ihr verdient {n} Kredite.",
    "Gold spricht lauter als Drohungen. Das Gold gehört heute Nacht Euch.",
    "Für {n} Kredite könnt Ihr wegsehen.",
]

NON_PERSUADE_DE = [
    "Die Lieferung kommt am {n}. des Monats.",
    "Ein Sturm zieht vom Westgrat heran.",
    "Mein Vetter repariert Droiden unten auf dem Markt.",
    "Die Archivtür ist seit {n} Jahren versiegelt.",
    "Nehmt den Lastenaufzug zur Ebene {n}. Achtet auf das kaputte Geländer.",
    "Seit dem Brand wohnt niemand mehr in dem Turm.",
    "Die Wache wechselt um Mitternacht. Der Hof leert sich.",
    "Ich bin auf einem Hof östlich des Flusses aufgewachsen.",
    "Das Terminal ist seit Wochen kaputt.",
    "Der Rat tagt wieder am {n}. Tag.",
    "Der Regen hat die Ernte dieses Jahr verdorben.",
    "Er führt das Buch unter dem Tresen. Alte Gewohnheit.",
    "Der Schacht reicht {n} Spannen tief.",
    "Reisende halten hier kaum noch an.",
    "Ihre Werkstatt riecht nach Öl und Kupfer.",
    "Das Leuchtfeuer auf der Klippe erlosch letzten Winter.",
]

N_PERSUADE = 48
N_NON_PERSUADE = 240  # pre-balance; the 0.2 target keeps 192


def build_tables() -> dict[str, list[tlk.TalkTable]]:
    en, de = [], []
    for i in range(N_PERSUADE):
        en.append(PERSUADE_EN[i % len(PERSUADE_EN)].format(n=100 + i))
        de.append(PERSUADE_DE[i % len(PERSUADE_DE)].format(n=100 + i))
    for i in range(N_NON_PERSUADE):
        en.append(NON_PERSUADE_EN[i % len(NON_PERSUADE_EN)].format(n=3 + i))
        de.append(NON_PERSUADE_DE[i % len(NON_PERSUADE_DE)].format(n=3 + i))
    entries = lambda texts: [tlk.TlkEntry.of_text(t) for t in texts]
    return {
        "en": [tlk.TalkTable(language_id=0, entries=entries(en))],
        "de": [tlk.TalkTable(language_id=2, entries=entries(de))],
    }


def main() -> None:
    config = pipeline.PipelineConfig(
        languages=("en", "de"),
        pivot_language="en",
        persuade_fraction=0.20,
        split_fractions=(0.70, 0.15, 0.15),
        seed=42,
    )
    records, manifest = pipeline.build_corpus(
        build_tables(), config, game_ids=["synth"],
        sources={"synth": {"en": "generated", "de": "generated"}},
    )
    paths = dataset.export_corpus(records, manifest, OUT)
    print(f"{len(records)} records -> {OUT}")
    for path in paths:
        print(f"  {path.name}")
    print("line counts:", manifest.line_counts)


if __name__ == "__main__":
    main()
