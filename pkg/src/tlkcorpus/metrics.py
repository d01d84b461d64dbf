"""Binary classification metrics with persuade as the positive class.

Any 0/0 ratio is defined as 0.0 and the affected field is flagged in the
report, so degenerate predictions (for example a model that never predicts
persuade) produce explicit, reproducible numbers instead of NaNs.

The JSON report schema (REPORT_SCHEMA) is shared with external trainers:
reports they emit validate here and render through the same pretty-printer,
so results from different model families stay diffable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .pipeline import NON_PERSUADE, PERSUADE

POSITIVE = PERSUADE
NEGATIVE = "no_persuade"

REPORT_SCHEMA = "persuasion-metrics-report/1"


class MetricsError(Exception):
    pass


class LengthMismatchError(MetricsError):
    pass


class EmptyInputError(MetricsError):
    pass


class EmptyMatrixError(MetricsError):
    pass


class ReportSchemaError(MetricsError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise MetricsError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    macro_f1: float
    weighted_f1: float
    persuade: ClassMetrics
    no_persuade: ClassMetrics
    zero_division_flags: tuple[str, ...] = ()


def confusion(predictions: Sequence[str], golds: Sequence[str]) -> ConfusionMatrix:
    if len(predictions) != len(golds):
        raise LengthMismatchError(f"{len(predictions)} predictions vs {len(golds)} golds")
    if not golds:
        raise EmptyInputError("no prediction pairs")
    tp = fp = fn = tn = 0
    for pred, gold in zip(predictions, golds):
        for value in (pred, gold):
            if value not in (PERSUADE, NON_PERSUADE):
                raise MetricsError(f"unknown label {value!r}")
        if gold == PERSUADE:
            if pred == PERSUADE:
                tp += 1
            else:
                fn += 1
        else:
            if pred == PERSUADE:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fp=fp, fn=fn, tn=tn)


def _ratio(num: int, den: int, flag: str, flags: list[str]) -> float:
    if den == 0:
        flags.append(flag)
        return 0.0
    return num / den


def metrics(matrix: ConfusionMatrix) -> MetricsReport:
    """Accuracy, per-class precision/recall/F1, macro and weighted F1."""
    if matrix.total == 0:
        raise EmptyMatrixError("empty confusion matrix")
    flags: list[str] = []

    pos_precision = _ratio(matrix.tp, matrix.tp + matrix.fp, f"{POSITIVE}.precision", flags)
    pos_recall = _ratio(matrix.tp, matrix.tp + matrix.fn, f"{POSITIVE}.recall", flags)
    pos_f1 = _f1(pos_precision, pos_recall, f"{POSITIVE}.f1", flags)
    pos_support = matrix.tp + matrix.fn

    neg_precision = _ratio(matrix.tn, matrix.tn + matrix.fn, f"{NEGATIVE}.precision", flags)
    neg_recall = _ratio(matrix.tn, matrix.tn + matrix.fp, f"{NEGATIVE}.recall", flags)
    neg_f1 = _f1(neg_precision, neg_recall, f"{NEGATIVE}.f1", flags)
    neg_support = matrix.tn + matrix.fp

    return MetricsReport(
        accuracy=(matrix.tp + matrix.tn) / matrix.total,
        macro_f1=(pos_f1 + neg_f1) / 2,
        weighted_f1=(pos_f1 * pos_support + neg_f1 * neg_support) / matrix.total,
        persuade=ClassMetrics(pos_precision, pos_recall, pos_f1, pos_support),
        no_persuade=ClassMetrics(neg_precision, neg_recall, neg_f1, neg_support),
        zero_division_flags=tuple(flags),
    )


def _f1(precision: float, recall: float, flag: str, flags: list[str]) -> float:
    if precision + recall == 0.0:
        flags.append(flag)
        return 0.0
    return 2 * precision * recall / (precision + recall)


def report_to_dict(
    report: MetricsReport,
    config: Mapping | None = None,
    assumptions: Mapping | None = None,
) -> dict:
    """Machine-readable form of a report (the shared schema)."""
    out: dict = {
        "schema": REPORT_SCHEMA,
        "accuracy": report.accuracy,
        "macro_f1": report.macro_f1,
        "weighted_f1": report.weighted_f1,
        "classes": {
            POSITIVE: _class_dict(report.persuade),
            NEGATIVE: _class_dict(report.no_persuade),
        },
        "zero_division_flags": list(report.zero_division_flags),
    }
    if config is not None:
        out["config"] = dict(config)
    if assumptions is not None:
        out["assumptions"] = dict(assumptions)
    return out


def _class_dict(cm: ClassMetrics) -> dict:
    return {
        "precision": cm.precision,
        "recall": cm.recall,
        "f1": cm.f1,
        "support": cm.support,
    }


_REQUIRED_KEYS = ("schema", "accuracy", "macro_f1", "weighted_f1", "classes",
                  "zero_division_flags")
_OPTIONAL_KEYS = ("config", "assumptions")
_CLASS_KEYS = ("precision", "recall", "f1", "support")


def validate_report_dict(d: Mapping) -> None:
    """Raise ReportSchemaError unless d follows the shared report schema."""
    if not isinstance(d, Mapping):
        raise ReportSchemaError("report is not an object")
    unknown = set(d) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS)
    missing = set(_REQUIRED_KEYS) - set(d)
    if unknown or missing:
        raise ReportSchemaError(
            f"unknown keys {sorted(unknown)}, missing keys {sorted(missing)}"
        )
    if d["schema"] != REPORT_SCHEMA:
        raise ReportSchemaError(f"unsupported report schema {d['schema']!r}")
    for key in ("accuracy", "macro_f1", "weighted_f1"):
        if not isinstance(d[key], (int, float)) or not 0.0 <= d[key] <= 1.0:
            raise ReportSchemaError(f"{key} must be a number in [0, 1]")
    if set(d["classes"]) != {POSITIVE, NEGATIVE}:
        raise ReportSchemaError(f"classes must be exactly {POSITIVE} and {NEGATIVE}")
    for name, cls in d["classes"].items():
        if set(cls) != set(_CLASS_KEYS):
            raise ReportSchemaError(f"class {name} must have keys {_CLASS_KEYS}")
        for key in ("precision", "recall", "f1"):
            if not isinstance(cls[key], (int, float)) or not 0.0 <= cls[key] <= 1.0:
                raise ReportSchemaError(f"{name}.{key} must be a number in [0, 1]")
        if not isinstance(cls["support"], int) or cls["support"] < 0:
            raise ReportSchemaError(f"{name}.support must be a non-negative integer")
    if not isinstance(d["zero_division_flags"], list):
        raise ReportSchemaError("zero_division_flags must be a list")


def report_from_dict(d: Mapping) -> MetricsReport:
    validate_report_dict(d)
    classes = d["classes"]
    return MetricsReport(
        accuracy=float(d["accuracy"]),
        macro_f1=float(d["macro_f1"]),
        weighted_f1=float(d["weighted_f1"]),
        persuade=ClassMetrics(**classes[POSITIVE]),
        no_persuade=ClassMetrics(**classes[NEGATIVE]),
        zero_division_flags=tuple(d["zero_division_flags"]),
    )


def write_report(path, report: MetricsReport, config=None, assumptions=None) -> None:
    d = report_to_dict(report, config=config, assumptions=assumptions)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(d, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def render_report(report: MetricsReport) -> str:
    """Fixed-layout text table: Accuracy, Macro avg F1, Weighted avg F1, then
    the per-class blocks. Values to 2 decimals; zero-division cells marked *.
    """
    flagged = set(report.zero_division_flags)

    def cell(value: float, flag: str) -> str:
        return f"{value:.2f}" + ("*" if flag in flagged else "")

    lines = [
        f"{'Accuracy':<20}{report.accuracy:.2f}",
        f"{'Macro avg. (F1)':<20}{report.macro_f1:.2f}",
        f"{'Weighted avg. (F1)':<20}{report.weighted_f1:.2f}",
    ]
    for name, cm in ((POSITIVE, report.persuade), (NEGATIVE, report.no_persuade)):
        lines.append(f"{name} (support {cm.support})")
        lines.append(f"  {'Precision':<18}{cell(cm.precision, f'{name}.precision')}")
        lines.append(f"  {'Recall':<18}{cell(cm.recall, f'{name}.recall')}")
        lines.append(f"  {'F1-score':<18}{cell(cm.f1, f'{name}.f1')}")
    if flagged:
        lines.append("* undefined ratio (0/0), reported as 0.00")
    return "\n".join(lines)
