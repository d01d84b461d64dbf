"""tlktrainer command line: train, eval, predict."""

from __future__ import annotations

import argparse
import json
import sys

from .config import TrainerConfig
from .data import CorpusSchemaError
from .evaluate import evaluate_model, predict_text, write_report
from .finetune import CheckpointUnavailableError, finetune


def cmd_train(args) -> int:
    config = TrainerConfig(
        checkpoint=args.checkpoint,
        epochs=args.epochs,
        warmup_steps=args.warmup_steps,
        weight_decay=args.weight_decay,
        dropout=args.dropout,
        seed=args.seed,
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        max_length=args.max_length,
    )
    artifact, loss_log = finetune(config, args.corpus, args.language, args.out)
    for epoch, loss in enumerate(loss_log, start=1):
        print(f"epoch {epoch}: mean loss {loss:.6f}", file=sys.stderr)
    print(str(artifact))
    return 0


def cmd_eval(args) -> int:
    report = evaluate_model(args.model, args.corpus, args.language,
                            predictions_out=args.predictions_out)
    if args.report_out:
        write_report(args.report_out, report)
    json.dump(report, sys.stdout, ensure_ascii=False, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_predict(args) -> int:
    label, probability = predict_text(args.model, args.text)
    print(f"{label}\t{probability:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tlktrainer",
        description="Fine-tune pretrained encoders on an exported persuasion corpus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fine-tune a checkpoint on a corpus train split")
    p.add_argument("corpus", help="exported corpus directory")
    p.add_argument("--checkpoint", required=True, help="pretrained encoder directory or identifier")
    p.add_argument("--language", default="all", help='language code or "all"')
    p.add_argument("--out", required=True, help="artifact output directory")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--warmup-steps", type=int, default=500)
    p.add_argument("--weight-decay", type=float, default=0.01)
    p.add_argument("--dropout", type=float, default=0.10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--learning-rate", type=float, default=5e-5)
    p.add_argument("--max-length", type=int, default=128)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score an artifact on a corpus test split")
    p.add_argument("corpus", help="exported corpus directory")
    p.add_argument("--model", required=True, help="artifact directory from train")
    p.add_argument("--language", required=True)
    p.add_argument("--report-out", help="write the report JSON here")
    p.add_argument("--predictions-out", help="write per-sentence predictions here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="classify one text")
    p.add_argument("--model", required=True)
    p.add_argument("--text", required=True)
    p.set_defaults(func=cmd_predict)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CorpusSchemaError, CheckpointUnavailableError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
