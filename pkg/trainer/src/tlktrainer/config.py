"""Fine-tuning configuration.

The recipe-pinned fields (epochs, warmup_steps, weight_decay, dropout, seed)
default to the published training recipe and are embedded verbatim in every
emitted report. batch_size, learning_rate, and max_length are NOT part of
that recipe; they are declared assumptions and every report carries them in
a separate "assumptions" block so nobody mistakes them for published values.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TrainerConfig:
    checkpoint: str
    epochs: int = 5
    warmup_steps: int = 500
    weight_decay: float = 0.01
    dropout: float = 0.10
    seed: int = 42
    batch_size: int = 16
    learning_rate: float = 5e-5
    max_length: int = 128

    def recipe_dict(self) -> dict:
        """The recipe-pinned fields, embedded as the report's config block."""
        return {
            "epochs": self.epochs,
            "warmup_steps": self.warmup_steps,
            "weight_decay": self.weight_decay,
            "dropout": self.dropout,
            "seed": self.seed,
        }

    def assumptions_dict(self) -> dict:
        """Knobs the recipe leaves unspecified; flagged in every report."""
        return {
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "max_length": self.max_length,
            "optimizer": "adamw",
            "scheduler": "linear_warmup_then_linear_decay",
        }

    def to_dict(self) -> dict:
        return {
            "checkpoint": self.checkpoint,
            **self.recipe_dict(),
            **{k: v for k, v in self.assumptions_dict().items()
               if k in ("batch_size", "learning_rate", "max_length")},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainerConfig":
        return cls(**d)
