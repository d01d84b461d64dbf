"""Reader for the exported corpus file format.

This package deliberately does not import the corpus builder; the JSON-lines
files and manifest.json ARE the contract. Schema: one <language>-<split>.jsonl
per language and split, each line an object with exactly str_ref, game_id,
sentence_index, text, label; manifest format "tlkcorpus-corpus/1".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

MANIFEST_FORMAT = "tlkcorpus-corpus/1"
RECORD_FIELDS = {"str_ref", "game_id", "sentence_index", "text", "label"}

# class ids: persuade is the positive class
LABEL_IDS = {"non_persuade": 0, "persuade": 1}
ID_LABELS = {v: k for k, v in LABEL_IDS.items()}
SPLITS = ("train", "validation", "test")


class CorpusSchemaError(Exception):
    pass


@dataclass(frozen=True)
class Example:
    text: str
    label: int
    language: str
    game_id: str
    str_ref: int
    sentence_index: int


def load_manifest(corpus_dir: str | Path) -> dict:
    path = Path(corpus_dir) / "manifest.json"
    if not path.is_file():
        raise CorpusSchemaError(f"no manifest.json in {corpus_dir}")
    try:
        manifest = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusSchemaError(f"manifest.json: {exc}") from None
    if manifest.get("format_version") != MANIFEST_FORMAT:
        raise CorpusSchemaError(
            f"unsupported corpus format {manifest.get('format_version')!r}"
        )
    languages = manifest.get("config", {}).get("languages")
    if not languages:
        raise CorpusSchemaError("manifest carries no languages")
    return manifest


def corpus_languages(corpus_dir: str | Path) -> list[str]:
    return list(load_manifest(corpus_dir)["config"]["languages"])


def load_split(corpus_dir: str | Path, language: str, split: str) -> list[Example]:
    """Examples for one language and split. language "all" concatenates every
    language in manifest order (parallel duplicates are kept on purpose)."""
    if split not in SPLITS:
        raise CorpusSchemaError(f"unknown split {split!r}")
    if language == "all":
        examples = []
        for lang in corpus_languages(corpus_dir):
            examples.extend(load_split(corpus_dir, lang, split))
        return examples

    path = Path(corpus_dir) / f"{language}-{split}.jsonl"
    if not path.is_file():
        raise CorpusSchemaError(f"corpus has no {path.name}")
    examples = []
    for lineno, raw in enumerate(path.read_text("utf-8").splitlines(), start=1):
        where = f"{path.name}:{lineno}"
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorpusSchemaError(f"{where}: {exc}") from None
        if not isinstance(obj, dict) or set(obj) != RECORD_FIELDS:
            raise CorpusSchemaError(f"{where}: record fields must be exactly {sorted(RECORD_FIELDS)}")
        if obj["label"] not in LABEL_IDS:
            raise CorpusSchemaError(f"{where}: unknown label {obj['label']!r}")
        if not isinstance(obj["text"], str):
            raise CorpusSchemaError(f"{where}: text must be a string")
        examples.append(Example(
            text=obj["text"],
            label=LABEL_IDS[obj["label"]],
            language=language,
            game_id=obj["game_id"],
            str_ref=obj["str_ref"],
            sentence_index=obj["sentence_index"],
        ))
    return examples
