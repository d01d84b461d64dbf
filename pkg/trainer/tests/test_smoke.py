"""Smoke acceptance: the five-epoch tiny-encoder run must learn, its report
must follow the shared schema, and the corpus builder's CLI must render it.
"""

import json
import subprocess
import sys
import time

import pytest

from conftest import SMOKE_CORPUS, TINY_ENCODER
from tlktrainer.config import TrainerConfig
from tlktrainer.evaluate import evaluate_model, predict_text, report_from_pairs, write_report
from tlktrainer.finetune import CheckpointUnavailableError, finetune, load_artifact

SMOKE_BUDGET_SECONDS = 300


def test_smoke_run_loss_decreases(trained_artifact):
    _, loss_log = trained_artifact
    assert len(loss_log) == 5
    assert loss_log[4] < loss_log[0]
    assert loss_log[-1] < loss_log[0]


def test_smoke_run_fits_budget(tmp_path):
    started = time.monotonic()
    config = TrainerConfig(checkpoint=str(TINY_ENCODER), batch_size=8)
    finetune(config, SMOKE_CORPUS, "en", tmp_path / "artifact")
    assert time.monotonic() - started < SMOKE_BUDGET_SECONDS


def test_report_embeds_recipe_exactly(trained_artifact, tmp_path):
    artifact, _ = trained_artifact
    report = evaluate_model(artifact, SMOKE_CORPUS, "en")
    assert report["config"] == {
        "epochs": 5,
        "warmup_steps": 500,
        "weight_decay": 0.01,
        "dropout": 0.10,
        "seed": 42,
    }
    assert report["assumptions"]["batch_size"] == 8
    assert report["assumptions"]["learning_rate"] == 5e-5


def test_report_parseable_by_corpus_builder_cli(trained_artifact, tmp_path):
    artifact, _ = trained_artifact
    report = evaluate_model(artifact, SMOKE_CORPUS, "en")
    path = tmp_path / "report.json"
    write_report(path, report)
    proc = subprocess.run(
        [sys.executable, "-m", "tlkcorpus.cli", "evaluate", "--from-report", str(path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.splitlines()[0].startswith("Accuracy")
    assert "epochs=5" in proc.stdout


def test_two_runs_produce_identical_predictions(tmp_path):
    config = TrainerConfig(checkpoint=str(TINY_ENCODER), batch_size=8, epochs=1)
    outputs = []
    for name in ("one", "two"):
        artifact, _ = finetune(config, SMOKE_CORPUS, "en", tmp_path / name)
        predictions = tmp_path / f"{name}.jsonl"
        evaluate_model(artifact, SMOKE_CORPUS, "en", predictions_out=predictions)
        outputs.append(predictions.read_bytes())
    assert outputs[0] == outputs[1]


def test_artifact_round_trip(trained_artifact):
    artifact, loss_log = trained_artifact
    _, model, run = load_artifact(artifact)
    assert run["config"]["epochs"] == 5
    assert run["loss_log"] == loss_log
    assert run["randomly_initialized"] is True
    assert model.config.num_labels == 2
    assert model.config.classifier_dropout == pytest.approx(0.10)


def test_predict_text_properties(trained_artifact):
    artifact, _ = trained_artifact
    label, probability = predict_text(artifact, "The credits are yours, trust me.")
    assert label in ("persuade", "non_persuade")
    assert 0.0 <= probability <= 1.0
    assert label == ("persuade" if probability > 0.5 else "non_persuade")


def test_predict_empty_text_is_handled(trained_artifact):
    artifact, _ = trained_artifact
    label, probability = predict_text(artifact, "")
    assert label in ("persuade", "non_persuade")
    assert 0.0 <= probability <= 1.0


def test_softmax_outputs_sum_to_one(trained_artifact):
    import torch

    artifact, _ = trained_artifact
    tokenizer, model, _ = load_artifact(artifact)
    encoded = tokenizer(["Open the gate.", "Gold for you."], padding=True,
                        return_tensors="pt")
    with torch.no_grad():
        probabilities = torch.softmax(model(**encoded).logits, dim=-1)
    assert probabilities.shape[-1] == 2
    for row in probabilities:
        assert abs(float(row.sum()) - 1.0) < 1e-6


def test_degenerate_predictions_flag_zero_divisions():
    report = report_from_pairs([0, 0, 0, 0], [0, 0, 1, 1])
    assert "persuade.precision" in report["zero_division_flags"]
    assert report["classes"]["persuade"]["recall"] == 0.0


def test_missing_checkpoint_errors(tmp_path):
    config = TrainerConfig(checkpoint=str(tmp_path / "nope"))
    with pytest.raises(CheckpointUnavailableError):
        finetune(config, SMOKE_CORPUS, "en", tmp_path / "artifact")
