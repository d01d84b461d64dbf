#!/usr/bin/env python3
"""Write the committed smoke-test fixtures.

Emits two things under tests/fixtures/:
  smoke_corpus/  an English corpus in the documented file format, separable
                 by currency tokens (persuade sentences mention credits or
                 gold, non-persuade ones never do), written directly as
                 JSON lines plus manifest; the corpus builder is not
                 imported, the files are the contract.
  tiny_encoder/  a 2-layer, 32-wide encoder config with a word-level vocab
                 built from the corpus; no weights, so loading it gives the
                 seeded random initialization the smoke test needs.
"""

import json
import re
from collections import Counter
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

PERSUADE = [
    "Trust me, I'll pay you {n} credits once we dock.",
    "There is gold in it for you, {n} good pieces.",
    "Open the gate and the credits are yours.",
    "Help me now and I'll give you {n} gold.",
    "The credits are real, count the credits yourself.",
    "One word to the captain and you earn {n} credits.",
    "Gold speaks louder than threats, take the gold tonight.",
    "For {n} credits you can look the other way.",
]

NON_PERSUADE = [
    "The shipment arrives on the {n}th of the month.",
    "A storm is coming in from the western ridge.",
    "My cousin repairs droids down in the lower market.",
    "The archive door has been sealed for {n} years.",
    "Take the service lift to level {n} and mind the rail.",
    "Nobody has lived in that tower since the fire.",
    "The patrol changes at midnight and the yard empties out.",
    "I grew up on a farm east of the river.",
    "That terminal has been broken for weeks.",
    "The council meets again on the {n}th day.",
    "Rain ruined most of the harvest this season.",
    "He keeps the ledger under the counter out of habit.",
    "The mine shaft runs {n} spans deep.",
    "Travelers rarely stop here anymore.",
    "Her workshop smells of oil and copper.",
    "The beacon on the cliff went dark last winter.",
]

# per split: (persuade lines, non-persuade lines)
SIZES = {"train": (128, 384), "validation": (16, 48), "test": (16, 48)}


def make_records():
    per_split = {}
    str_ref = 0
    for split, (n_pos, n_neg) in SIZES.items():
        records = []
        for i in range(n_pos):
            records.append({
                "str_ref": str_ref, "game_id": "smoke", "sentence_index": 0,
                "text": PERSUADE[i % len(PERSUADE)].format(n=100 + str_ref),
                "label": "persuade",
            })
            str_ref += 1
        for i in range(n_neg):
            records.append({
                "str_ref": str_ref, "game_id": "smoke", "sentence_index": 0,
                "text": NON_PERSUADE[i % len(NON_PERSUADE)].format(n=3 + str_ref),
                "label": "non_persuade",
            })
            str_ref += 1
        records.sort(key=lambda r: (r["game_id"], r["str_ref"], r["sentence_index"]))
        per_split[split] = records
    return per_split


def write_corpus(per_split):
    out = FIXTURES / "smoke_corpus"
    out.mkdir(parents=True, exist_ok=True)
    sentence_counts = {"en": {}}
    for split, records in per_split.items():
        path = out / f"en-{split}.jsonl"
        path.write_text(
            "\n".join(json.dumps(r, ensure_ascii=False) for r in records) + "\n",
            encoding="utf-8",
        )
        counts = Counter(r["label"] for r in records)
        sentence_counts["en"][split] = {
            "persuade": counts["persuade"], "non_persuade": counts["non_persuade"],
        }
    line_counts = {
        label: sum(sentence_counts["en"][s][label] for s in SIZES)
        for label in ("persuade", "non_persuade")
    }
    manifest = {
        "format_version": "tlkcorpus-corpus/1",
        "seed": 42,
        "config": {
            "languages": ["en"],
            "pivot_language": "en",
            "tag_patterns": [{"regex": "(?i)\\[\\s*persua(?:de|sion)\\b[^\\]]*\\]",
                              "tag": "Persuade"}],
            "comment_denylist": ["(?i)do not translate", "(?i)placeholder"],
            "persuade_fraction": 0.25,
            "split_fractions": [0.7, 0.15, 0.15],
            "seed": 42,
        },
        "game_sources": {"smoke": {"en": "generated"}},
        "line_counts": line_counts,
        "sentence_counts": sentence_counts,
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    return out


def write_tiny_encoder(per_split):
    out = FIXTURES / "tiny_encoder"
    out.mkdir(parents=True, exist_ok=True)
    words = set()
    for records in per_split.values():
        for record in records:
            words.update(re.findall(r"[a-z]+", record["text"].lower()))
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
             ".", ",", "'", "!", "?"] + sorted(words)
    (out / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    config = {
        "architectures": ["BertForSequenceClassification"],
        "model_type": "bert",
        "vocab_size": len(vocab),
        "hidden_size": 32,
        "num_hidden_layers": 2,
        "num_attention_heads": 2,
        "intermediate_size": 64,
        "max_position_embeddings": 64,
        "pad_token_id": 0,
    }
    (out / "config.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    return out, len(vocab)


def main():
    per_split = make_records()
    corpus = write_corpus(per_split)
    encoder, vocab_size = write_tiny_encoder(per_split)
    total = sum(len(r) for r in per_split.values())
    print(f"{corpus}: {total} records")
    print(f"{encoder}: vocab {vocab_size}")


if __name__ == "__main__":
    main()
