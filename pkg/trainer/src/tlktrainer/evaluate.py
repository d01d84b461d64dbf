"""Test-split evaluation emitting the shared metrics-report schema.

The report JSON (schema "persuasion-metrics-report/1") is byte-compatible
with the corpus builder's reports: same keys, same class names, same
zero-division convention (0/0 ratios are 0.0 and flagged). The recipe config
and the declared assumptions are embedded in every report.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import ID_LABELS, load_split
from .finetune import load_artifact

REPORT_SCHEMA = "persuasion-metrics-report/1"

POSITIVE = "persuade"
NEGATIVE = "no_persuade"


def _ratio(num, den, flag, flags):
    if den == 0:
        flags.append(flag)
        return 0.0
    return num / den


def report_from_pairs(predictions: list[int], golds: list[int],
                      config: dict | None = None,
                      assumptions: dict | None = None) -> dict:
    """Metrics report dict from parallel class-id sequences (persuade = 1)."""
    tp = sum(1 for p, g in zip(predictions, golds) if g == 1 and p == 1)
    fn = sum(1 for p, g in zip(predictions, golds) if g == 1 and p == 0)
    fp = sum(1 for p, g in zip(predictions, golds) if g == 0 and p == 1)
    tn = sum(1 for p, g in zip(predictions, golds) if g == 0 and p == 0)
    total = tp + fp + fn + tn
    flags: list[str] = []

    pos_precision = _ratio(tp, tp + fp, f"{POSITIVE}.precision", flags)
    pos_recall = _ratio(tp, tp + fn, f"{POSITIVE}.recall", flags)
    pos_f1 = _ratio(2 * pos_precision * pos_recall, pos_precision + pos_recall,
                    f"{POSITIVE}.f1", flags)
    neg_precision = _ratio(tn, tn + fn, f"{NEGATIVE}.precision", flags)
    neg_recall = _ratio(tn, tn + fp, f"{NEGATIVE}.recall", flags)
    neg_f1 = _ratio(2 * neg_precision * neg_recall, neg_precision + neg_recall,
                    f"{NEGATIVE}.f1", flags)

    report = {
        "schema": REPORT_SCHEMA,
        "accuracy": (tp + tn) / total,
        "macro_f1": (pos_f1 + neg_f1) / 2,
        "weighted_f1": (pos_f1 * (tp + fn) + neg_f1 * (tn + fp)) / total,
        "classes": {
            POSITIVE: {"precision": pos_precision, "recall": pos_recall,
                       "f1": pos_f1, "support": tp + fn},
            NEGATIVE: {"precision": neg_precision, "recall": neg_recall,
                       "f1": neg_f1, "support": tn + fp},
        },
        "zero_division_flags": flags,
    }
    if config is not None:
        report["config"] = dict(config)
    if assumptions is not None:
        report["assumptions"] = dict(assumptions)
    return report


def predict_examples(tokenizer, model, texts: list[str], max_length: int,
                     batch_size: int = 32) -> list[tuple[int, float]]:
    """(argmax class id, persuade probability) per text, in order."""
    results = []
    with torch.no_grad():
        for start in range(0, len(texts), batch_size):
            chunk = texts[start:start + batch_size]
            encoded = tokenizer(chunk, padding=True, truncation=True,
                                max_length=max_length, return_tensors="pt")
            probabilities = torch.softmax(model(**encoded).logits, dim=-1)
            for row in probabilities:
                results.append((int(torch.argmax(row)), float(row[1])))
    return results


def evaluate_model(artifact_dir: str | Path, corpus_dir: str | Path,
                   language: str, predictions_out: str | Path | None = None) -> dict:
    """Score the artifact on the test split; returns the report dict."""
    tokenizer, model, run = load_artifact(artifact_dir)
    examples = load_split(corpus_dir, language, "test")
    max_length = run["config"].get("max_length", 128)
    pairs = predict_examples(tokenizer, model, [e.text for e in examples], max_length)

    if predictions_out is not None:
        lines = []
        for example, (label_id, probability) in zip(examples, pairs):
            lines.append(json.dumps({
                "game_id": example.game_id,
                "str_ref": example.str_ref,
                "sentence_index": example.sentence_index,
                "language": example.language,
                "prediction": ID_LABELS[label_id],
                "persuade_probability": probability,
            }, ensure_ascii=False))
        Path(predictions_out).write_text("\n".join(lines) + "\n", encoding="utf-8")

    return report_from_pairs(
        [label_id for label_id, _ in pairs],
        [example.label for example in examples],
        config=run["recipe"],
        assumptions=run["assumptions"],
    )


def predict_text(artifact_dir: str | Path, text: str) -> tuple[str, float]:
    """(label, persuade probability) for one input text."""
    tokenizer, model, run = load_artifact(artifact_dir)
    (label_id, probability), = predict_examples(
        tokenizer, model, [text], run["config"].get("max_length", 128)
    )
    return ID_LABELS[label_id], probability


def write_report(path: str | Path, report: dict) -> None:
    Path(path).write_text(json.dumps(report, ensure_ascii=False, indent=2) + "\n",
                          encoding="utf-8")
