"""On-disk corpus format: newline-delimited records plus a manifest.

One JSON-lines file per (language, split), named ``<language>-<split>.jsonl``,
each line an object with exactly the keys str_ref, game_id, sentence_index,
text, label, in that order, UTF-8 with LF endings, sorted by
(game_id, str_ref, sentence_index). The manifest lives in ``manifest.json``
next to them. Files are written via a temp file and rename, and sorting
before write makes re-export byte-identical, so exported corpora diff
cleanly and can be verified against their manifest at import time.

These files are the contract between the corpus builder and any trainer
consuming it; change MANIFEST_FORMAT when the schema changes.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

from .pipeline import (
    LABELS,
    MANIFEST_FORMAT,
    SPLITS,
    DatasetManifest,
    SentenceRecord,
)

RECORD_FIELDS = ("str_ref", "game_id", "sentence_index", "text", "label")


class DatasetError(Exception):
    pass


class ValidationError(DatasetError):
    """Records and manifest disagree before export."""


class SchemaError(DatasetError):
    """A file does not follow the documented record schema."""


class CountMismatchError(DatasetError):
    """Manifest counts do not match the records actually on disk."""


def _record_file(language: str, split: str) -> str:
    return f"{language}-{split}.jsonl"


def _record_sort_key(record: SentenceRecord):
    return (record.game_id, record.str_ref, record.sentence_index)


def _count_records(records: Iterable[SentenceRecord]) -> Counter:
    return Counter((r.language, r.split, r.label) for r in records)


def _manifest_counts(manifest: DatasetManifest) -> Counter:
    counts: Counter = Counter()
    for language, per_split in manifest.sentence_counts.items():
        for split, per_label in per_split.items():
            for label, n in per_label.items():
                if n:
                    counts[(language, split, label)] = n
    return counts


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def export_corpus(
    records: Sequence[SentenceRecord],
    manifest: DatasetManifest,
    destination: str | Path,
) -> list[Path]:
    """Write the corpus under ``destination``, returning the written paths."""
    if not records:
        raise ValidationError("refusing to export an empty corpus")
    for record in records:
        if record.label not in LABELS:
            raise ValidationError(f"unknown label {record.label!r}")
        if record.split not in SPLITS:
            raise ValidationError(f"unknown split {record.split!r}")
    if _count_records(records) != _manifest_counts(manifest):
        raise ValidationError("manifest sentence counts do not match the records")

    destination = Path(destination)
    destination.mkdir(parents=True, exist_ok=True)

    by_file: dict[tuple[str, str], list[SentenceRecord]] = {}
    for record in records:
        by_file.setdefault((record.language, record.split), []).append(record)

    written = []
    for (language, split), group in sorted(by_file.items()):
        lines = []
        for record in sorted(group, key=_record_sort_key):
            obj = {
                "str_ref": record.str_ref,
                "game_id": record.game_id,
                "sentence_index": record.sentence_index,
                "text": record.text,
                "label": record.label,
            }
            lines.append(json.dumps(obj, ensure_ascii=False))
        path = destination / _record_file(language, split)
        _atomic_write(path, ("\n".join(lines) + "\n").encode("utf-8"))
        written.append(path)

    manifest_path = destination / "manifest.json"
    _atomic_write(
        manifest_path,
        (json.dumps(manifest.to_dict(), ensure_ascii=False, indent=2) + "\n").encode("utf-8"),
    )
    written.append(manifest_path)
    return written


def import_corpus(source: str | Path) -> tuple[list[SentenceRecord], DatasetManifest]:
    """Load a corpus directory, re-verifying schema and manifest counts."""
    source = Path(source)
    manifest_path = source / "manifest.json"
    if not manifest_path.is_file():
        raise SchemaError(f"no manifest.json in {source}")
    try:
        manifest = DatasetManifest.from_dict(json.loads(manifest_path.read_text("utf-8")))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise SchemaError(f"bad manifest: {exc}") from None
    if manifest.format_version != MANIFEST_FORMAT:
        raise SchemaError(f"unsupported corpus format {manifest.format_version!r}")

    records: list[SentenceRecord] = []
    for language in manifest.config["languages"]:
        for split in SPLITS:
            path = source / _record_file(language, split)
            if not path.is_file():
                continue
            for lineno, raw in enumerate(path.read_text("utf-8").splitlines(), start=1):
                records.append(_parse_record(raw, language, split, path, lineno))

    if _count_records(records) != _manifest_counts(manifest):
        raise CountMismatchError("record files do not match the manifest counts")
    records.sort(key=lambda r: (r.language, r.game_id, r.str_ref, r.sentence_index))
    return records, manifest


def _parse_record(
    raw: str, language: str, split: str, path: Path, lineno: int
) -> SentenceRecord:
    where = f"{path.name}:{lineno}"
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{where}: not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: record is not an object")
    if set(obj) != set(RECORD_FIELDS):
        unknown = set(obj) - set(RECORD_FIELDS)
        missing = set(RECORD_FIELDS) - set(obj)
        raise SchemaError(
            f"{where}: unknown fields {sorted(unknown)}, missing fields {sorted(missing)}"
        )
    if obj["label"] not in LABELS:
        raise SchemaError(f"{where}: label must be one of {LABELS}, got {obj['label']!r}")
    if not isinstance(obj["str_ref"], int) or obj["str_ref"] < 0:
        raise SchemaError(f"{where}: str_ref must be a non-negative integer")
    if not isinstance(obj["sentence_index"], int) or obj["sentence_index"] < 0:
        raise SchemaError(f"{where}: sentence_index must be a non-negative integer")
    if not isinstance(obj["game_id"], str) or not isinstance(obj["text"], str):
        raise SchemaError(f"{where}: game_id and text must be strings")
    return SentenceRecord(
        str_ref=obj["str_ref"],
        game_id=obj["game_id"],
        language=language,
        sentence_index=obj["sentence_index"],
        text=obj["text"],
        label=obj["label"],
        split=split,
    )


def compute_stats(records: Iterable[SentenceRecord]) -> dict:
    """Per-language persuade / non_persuade sentence counts plus the
    multilingual totals (sum over languages)."""
    per_language: dict[str, dict[str, int]] = {}
    for record in records:
        counts = per_language.setdefault(record.language, {label: 0 for label in LABELS})
        counts[record.label] += 1
    total = {label: sum(c[label] for c in per_language.values()) for label in LABELS}
    return {"per_language": per_language, "total": total}


def render_stats(stats: dict) -> str:
    """Fixed-width table of compute_stats output."""
    rows = [("", "Persuade", "Non-persuade")]
    for language in sorted(stats["per_language"]):
        counts = stats["per_language"][language]
        rows.append((language, str(counts[LABELS[0]]), str(counts[LABELS[1]])))
    rows.append(("Multilingual (total)", str(stats["total"][LABELS[0]]),
                 str(stats["total"][LABELS[1]])))
    width0 = max(len(r[0]) for r in rows)
    width1 = max(len(r[1]) for r in rows)
    width2 = max(len(r[2]) for r in rows)
    return "\n".join(
        f"{r[0]:<{width0}}  {r[1]:>{width1}}  {r[2]:>{width2}}".rstrip() for r in rows
    )
