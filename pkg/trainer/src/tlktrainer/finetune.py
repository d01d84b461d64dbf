"""Sequence-classification fine-tuning over an exported corpus.

The recipe: five epochs, AdamW with 0.01 weight decay, linear warmup over the
first 500 optimizer steps then linear decay, 10% dropout on the pooled
output, softmax over a two-way linear head, seed fixed before parameter
initialization and data ordering.

Checkpoints are given as a directory or hub identifier. A local directory
that holds a config but no weights is loaded randomly initialized (that is
the smoke-test path: a tiny encoder config trains in seconds on CPU).
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
from torch.utils.data import DataLoader, Dataset
from transformers import AutoConfig, AutoModelForSequenceClassification, AutoTokenizer
from transformers.utils import logging as hf_logging

from .config import TrainerConfig
from .data import CorpusSchemaError, Example, load_manifest, load_split

hf_logging.disable_progress_bar()
hf_logging.set_verbosity_error()

RUN_FORMAT = "tlktrainer-run/1"

_WEIGHT_FILES = ("model.safetensors", "pytorch_model.bin", "model.safetensors.index.json")


class CheckpointUnavailableError(Exception):
    pass


class _ExampleDataset(Dataset):
    def __init__(self, examples: list[Example]):
        self.examples = examples

    def __len__(self):
        return len(self.examples)

    def __getitem__(self, index):
        example = self.examples[index]
        return example.text, example.label


def load_checkpoint(checkpoint: str, dropout: float, num_labels: int = 2):
    """Returns (tokenizer, model, randomly_initialized)."""
    path = Path(checkpoint)
    try:
        tokenizer = AutoTokenizer.from_pretrained(checkpoint)
        if path.is_dir() and not any((path / f).is_file() for f in _WEIGHT_FILES):
            config = AutoConfig.from_pretrained(
                checkpoint, num_labels=num_labels, classifier_dropout=dropout
            )
            model = AutoModelForSequenceClassification.from_config(config)
            return tokenizer, model, True
        model = AutoModelForSequenceClassification.from_pretrained(
            checkpoint, num_labels=num_labels, classifier_dropout=dropout
        )
        return tokenizer, model, False
    except (OSError, ValueError) as exc:
        raise CheckpointUnavailableError(f"cannot load checkpoint {checkpoint!r}: {exc}") from None


def _lr_factor(step: int, warmup: int, total: int) -> float:
    if step < warmup:
        return step / max(1, warmup)
    if total <= warmup:
        return 1.0
    return max(0.0, (total - step) / (total - warmup))


def _collate(tokenizer, max_length):
    def collate(batch):
        texts = [text for text, _ in batch]
        labels = torch.tensor([label for _, label in batch], dtype=torch.long)
        encoded = tokenizer(
            texts, padding=True, truncation=True, max_length=max_length,
            return_tensors="pt",
        )
        encoded["labels"] = labels
        return encoded
    return collate


def finetune(config: TrainerConfig, corpus_dir: str | Path, language: str,
             out_dir: str | Path) -> tuple[Path, list[float]]:
    """Fine-tune on the train split of one language (or "all"), save the
    artifact, and return (artifact path, per-epoch mean training loss)."""
    manifest = load_manifest(corpus_dir)
    examples = load_split(corpus_dir, language, "train")
    if not examples:
        raise CorpusSchemaError("empty training split")

    # Seed before any parameter initialization or data ordering.
    torch.manual_seed(config.seed)
    tokenizer, model, randomly_initialized = load_checkpoint(
        config.checkpoint, dropout=config.dropout
    )
    model.train()

    loader = DataLoader(
        _ExampleDataset(examples),
        batch_size=config.batch_size,
        shuffle=True,
        generator=torch.Generator().manual_seed(config.seed),
        collate_fn=_collate(tokenizer, config.max_length),
    )
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=config.learning_rate, weight_decay=config.weight_decay
    )
    total_steps = config.epochs * len(loader)
    scheduler = torch.optim.lr_scheduler.LambdaLR(
        optimizer, lambda step: _lr_factor(step, config.warmup_steps, total_steps)
    )

    loss_log: list[float] = []
    for _ in range(config.epochs):
        epoch_losses = []
        for batch in loader:
            optimizer.zero_grad()
            out = model(**batch)
            out.loss.backward()
            optimizer.step()
            scheduler.step()
            epoch_losses.append(float(out.loss.detach()))
        loss_log.append(sum(epoch_losses) / len(epoch_losses))

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    run = {
        "format": RUN_FORMAT,
        "config": config.to_dict(),
        "recipe": config.recipe_dict(),
        "assumptions": config.assumptions_dict(),
        "language": language,
        "corpus_seed": manifest.get("seed"),
        "train_examples": len(examples),
        "randomly_initialized": randomly_initialized,
        "loss_log": loss_log,
        "nondeterminism_notes": [
            "single-process CPU/GPU kernels may differ across hardware and library builds",
        ],
    }
    (out_dir / "run.json").write_text(
        json.dumps(run, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    return out_dir, loss_log


def load_artifact(artifact_dir: str | Path):
    """(tokenizer, model in eval mode, run record) for a saved artifact."""
    artifact_dir = Path(artifact_dir)
    run_path = artifact_dir / "run.json"
    if not run_path.is_file():
        raise CheckpointUnavailableError(f"no run.json in {artifact_dir}")
    run = json.loads(run_path.read_text("utf-8"))
    if run.get("format") != RUN_FORMAT:
        raise CheckpointUnavailableError(f"unsupported run format {run.get('format')!r}")
    tokenizer = AutoTokenizer.from_pretrained(artifact_dir)
    model = AutoModelForSequenceClassification.from_pretrained(artifact_dir)
    model.eval()
    return tokenizer, model, run
