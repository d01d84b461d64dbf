"""Bag-of-ngrams logistic regression over corpus sentences.

Deterministic by construction: the vocabulary is the lexicographically
sorted set of training-split unigrams and bigrams, training is full-batch
gradient descent (no stochastic shuffling), and the model serializes to JSON
whose floats round-trip exactly. Two runs over the same corpus produce
byte-identical model files.

The loss is mean binary cross-entropy plus (l2/2)*||w||^2; the bias is not
regularized.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .pipeline import NON_PERSUADE, PERSUADE, SentenceRecord

MODEL_FORMAT = "tlkcorpus-baseline-model/1"

# Lowercased word tokens: alphanumeric runs with apostrophes kept inside
# ("don't" stays one token), underscores and other punctuation split.
_TOKEN = re.compile(r"[^\W_]+(?:'[^\W_]+)*", re.UNICODE)


class BaselineError(Exception):
    pass


class EmptyClassError(BaselineError):
    pass


class NonFiniteLossError(BaselineError):
    pass


@dataclass(frozen=True)
class Hyperparams:
    learning_rate: float = 0.1
    epochs: int = 200
    l2: float = 1e-4
    seed: int = 42

    def to_dict(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "l2": self.l2,
            "seed": self.seed,
        }


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


def ngrams(text: str) -> list[str]:
    """Unigrams plus adjacent bigrams (bigram feature = tokens joined by a
    space)."""
    tokens = tokenize(text)
    return tokens + [f"{a} {b}" for a, b in zip(tokens, tokens[1:])]


@dataclass(frozen=True)
class FeatureVocab:
    index: dict[str, int]

    def __len__(self) -> int:
        return len(self.index)

    @classmethod
    def build(cls, texts: Iterable[str]) -> "FeatureVocab":
        features = set()
        for text in texts:
            features.update(ngrams(text))
        return cls(index={f: i for i, f in enumerate(sorted(features))})


def featurize(text: str, vocab: FeatureVocab) -> dict[int, int]:
    """Sparse count vector {column: count}; out-of-vocab features dropped."""
    counts: dict[int, int] = {}
    for feature in ngrams(text):
        column = vocab.index.get(feature)
        if column is not None:
            counts[column] = counts.get(column, 0) + 1
    return counts


def _design_matrix(texts: Sequence[str], vocab: FeatureVocab) -> sparse.csr_matrix:
    data, indices, indptr = [], [], [0]
    for text in texts:
        counts = featurize(text, vocab)
        for column in sorted(counts):
            indices.append(column)
            data.append(float(counts[column]))
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(texts), len(vocab)),
    )


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_grad(
    weights: np.ndarray,
    bias: float,
    x: sparse.csr_matrix,
    y: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray, float]:
    """Regularized logistic loss with its analytic gradient."""
    n = x.shape[0]
    z = x @ weights + bias
    p = _sigmoid(z)
    eps = 1e-12
    ce = -np.mean(y * np.log(p + eps) + (1.0 - y) * np.log(1.0 - p + eps))
    loss = float(ce + 0.5 * l2 * float(weights @ weights))
    residual = (p - y) / n
    grad_w = np.asarray(x.T @ residual).ravel() + l2 * weights
    grad_b = float(residual.sum())
    return loss, grad_w, grad_b


@dataclass
class BaselineModel:
    weights: np.ndarray
    bias: float
    hyperparams: Hyperparams
    loss_history: list[float] = field(default_factory=list)


def train_baseline(
    train_records: Sequence[SentenceRecord],
    hyperparams: Hyperparams = Hyperparams(),
    validation: Sequence[SentenceRecord] | None = None,
) -> tuple[BaselineModel, FeatureVocab]:
    """Fit by full-batch gradient descent from zero-initialized weights.

    The optional validation records are only used to detect divergence early;
    they never influence the fitted parameters.
    """
    labels = {r.label for r in train_records}
    if PERSUADE not in labels or len(labels) < 2:
        raise EmptyClassError(f"training data must contain both labels, got {sorted(labels)}")

    vocab = FeatureVocab.build(r.text for r in train_records)
    x = _design_matrix([r.text for r in train_records], vocab)
    y = np.array([1.0 if r.label == PERSUADE else 0.0 for r in train_records])

    x_val = y_val = None
    if validation:
        x_val = _design_matrix([r.text for r in validation], vocab)
        y_val = np.array([1.0 if r.label == PERSUADE else 0.0 for r in validation])

    weights = np.zeros(len(vocab))
    bias = 0.0
    history = []
    for epoch in range(hyperparams.epochs):
        loss, grad_w, grad_b = loss_and_grad(weights, bias, x, y, hyperparams.l2)
        if not math.isfinite(loss):
            raise NonFiniteLossError(f"training loss diverged at epoch {epoch}")
        if x_val is not None:
            val_loss, _, _ = loss_and_grad(weights, bias, x_val, y_val, hyperparams.l2)
            if not math.isfinite(val_loss):
                raise NonFiniteLossError(f"validation loss diverged at epoch {epoch}")
        history.append(loss)
        weights = weights - hyperparams.learning_rate * grad_w
        bias = bias - hyperparams.learning_rate * grad_b

    model = BaselineModel(weights=weights, bias=bias, hyperparams=hyperparams,
                          loss_history=history)
    return model, vocab


def predict(model: BaselineModel, vocab: FeatureVocab, text: str) -> tuple[str, float]:
    """(label, probability of persuade); persuade iff probability > 0.5."""
    z = model.bias
    for column, count in featurize(text, vocab).items():
        z += model.weights[column] * count
    probability = float(_sigmoid(np.array([z]))[0])
    return (PERSUADE if probability > 0.5 else NON_PERSUADE), probability


def save_model(path: str | Path, model: BaselineModel, vocab: FeatureVocab) -> None:
    features = [""] * len(vocab)
    for feature, column in vocab.index.items():
        features[column] = feature
    payload = {
        "format": MODEL_FORMAT,
        "features": features,
        "weights": [float(w) for w in model.weights],
        "bias": model.bias,
        "hyperparams": model.hyperparams.to_dict(),
        "loss_history": model.loss_history,
    }
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def load_model(path: str | Path) -> tuple[BaselineModel, FeatureVocab]:
    payload = json.loads(Path(path).read_text("utf-8"))
    if payload.get("format") != MODEL_FORMAT:
        raise BaselineError(f"unsupported model format {payload.get('format')!r}")
    vocab = FeatureVocab(index={f: i for i, f in enumerate(payload["features"])})
    if len(payload["weights"]) != len(vocab):
        raise BaselineError("weight count does not match vocabulary size")
    model = BaselineModel(
        weights=np.array(payload["weights"], dtype=float),
        bias=float(payload["bias"]),
        hyperparams=Hyperparams(**payload["hyperparams"]),
        loss_history=list(payload["loss_history"]),
    )
    return model, vocab
