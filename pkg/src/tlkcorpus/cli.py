"""Command-line front end: extract, build, stats, train-baseline, evaluate,
dump-config.

Pipeline runs are driven by a TOML config file rather than flags so the
manifest can embed the exact configuration snapshot. Documented artifacts go
to stdout, diagnostics to stderr; every error exits nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

try:
    import tomllib
except ImportError:                     # Python 3.10
    import tomli as tomllib

from . import baseline, dataset, metrics, pipeline, tlk

DEFAULT_CONFIG = """\
# tlkcorpus build configuration.
# Unknown keys are rejected; every key below shows its default.

# Languages to align, and the language whose tags decide the label.
languages = ["en"]
pivot_language = "en"

# Fraction of persuade lines after balancing, and the train/validation/test
# fractions (line-level; remainders go to train).
persuade_fraction = 0.2
split_fractions = [0.7, 0.15, 0.15]

# Seed for the balancing and split streams.
seed = 42

# Where `build` writes the corpus (override with --out).
out_dir = "corpus"

# Skill-tag matchers; each match labels the line persuade and is recorded
# under the canonical tag name.
[[tag_patterns]]
regex = "(?i)\\\\[\\\\s*persua(?:de|sion)\\\\b[^\\\\]]*\\\\]"
tag = "Persuade"

# Games to extract; list one [[games]] block per game, with one talk table
# per configured language.
#
# [[games]]
# id = "kotor"
# [games.tlk]
# en = "path/to/english/dialog.tlk"

# Developer-comment patterns; matching non-pivot lines are dropped from
# every language.
[cleaning]
comment_denylist = ["(?i)do not translate", "(?i)placeholder"]

# Codepage per talk-table language id (ids are the Aurora convention:
# 0 English, 1 French, 2 German, 3 Italian, 4 Spanish).
[codepages]
default = "cp1252"

# Baseline classifier hyperparameters.
[baseline]
learning_rate = 0.1
epochs = 200
l2 = 1e-4
seed = 42
"""

_TOP_KEYS = {
    "languages", "pivot_language", "persuade_fraction", "split_fractions",
    "seed", "out_dir", "tag_patterns", "games", "cleaning", "codepages",
    "baseline",
}
_BASELINE_KEYS = {"learning_rate", "epochs", "l2", "seed"}


class CliError(Exception):
    pass


def _fail(message: str) -> "CliError":
    return CliError(message)


def load_run_config(path: Path) -> dict:
    """Parse and validate the TOML run configuration."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise _fail(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise _fail(f"{path}: {exc}") from None

    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise _fail(f"{path}: unknown config keys {sorted(unknown)}")
    cleaning = raw.get("cleaning", {})
    if set(cleaning) - {"comment_denylist"}:
        raise _fail(f"{path}: unknown [cleaning] keys {sorted(set(cleaning) - {'comment_denylist'})}")
    baseline_raw = raw.get("baseline", {})
    if set(baseline_raw) - _BASELINE_KEYS:
        raise _fail(f"{path}: unknown [baseline] keys {sorted(set(baseline_raw) - _BASELINE_KEYS)}")

    tag_patterns = tuple(
        pipeline.TagPattern(regex=p["regex"], tag=p["tag"])
        for p in raw.get("tag_patterns", [])
    ) or pipeline.DEFAULT_TAG_PATTERNS
    try:
        config = pipeline.PipelineConfig(
            languages=tuple(raw.get("languages", ("en",))),
            pivot_language=raw.get("pivot_language", "en"),
            tag_patterns=tag_patterns,
            comment_denylist=tuple(
                cleaning.get("comment_denylist", pipeline.DEFAULT_COMMENT_DENYLIST)
            ),
            persuade_fraction=raw.get("persuade_fraction", 0.20),
            split_fractions=tuple(raw.get("split_fractions", (0.70, 0.15, 0.15))),
            seed=raw.get("seed", 42),
        )
    except pipeline.ConfigError as exc:
        raise _fail(f"{path}: {exc}") from None

    codepages_raw = dict(raw.get("codepages", {}))
    default_cp = codepages_raw.pop("default", "cp1252")
    try:
        mapping = {int(k): v for k, v in codepages_raw.items()}
    except ValueError:
        raise _fail(f"{path}: [codepages] keys must be integer language ids") from None
    codepages = tlk.CodepageConfig(
        mapping=mapping or dict(tlk.DEFAULT_CODEPAGES.mapping), default=default_cp
    )

    games = raw.get("games", [])
    for game in games:
        if set(game) - {"id", "tlk"}:
            raise _fail(f"{path}: unknown [[games]] keys {sorted(set(game) - {'id', 'tlk'})}")
        if "id" not in game or "tlk" not in game:
            raise _fail(f"{path}: every [[games]] block needs an id and a tlk table")

    hp = baseline.Hyperparams(
        learning_rate=baseline_raw.get("learning_rate", 0.1),
        epochs=baseline_raw.get("epochs", 200),
        l2=baseline_raw.get("l2", 1e-4),
        seed=baseline_raw.get("seed", 42),
    )
    return {
        "pipeline": config,
        "codepages": codepages,
        "games": games,
        "out_dir": raw.get("out_dir", "corpus"),
        "baseline": hp,
        "config_dir": path.parent,
    }


def _read_table(path: Path, codepages: tlk.CodepageConfig) -> tlk.TalkTable:
    data = path.read_bytes()
    if tlk.looks_like_xml(data):
        table, warnings = tlk.parse_tlk_xml(data.decode("utf-8"))
        for w in warnings:
            print(f"warning: {path}: {w}", file=sys.stderr)
        return table
    return tlk.parse_tlk(data, codepages)


def _escape(text: str) -> str:
    return (
        text.replace("\\", "\\\\").replace("\t", "\\t")
        .replace("\n", "\\n").replace("\r", "\\r")
    )


def cmd_extract(args) -> int:
    path = Path(args.tlk)
    if not path.is_file():
        raise _fail(f"no such file: {path}")
    codepages = tlk.DEFAULT_CODEPAGES
    if args.codepage:
        codepages = tlk.CodepageConfig(mapping={}, default=args.codepage)
    table = _read_table(path, codepages)
    lines = ["str_ref\tlanguage\tlabel\ttext"]
    for str_ref, entry in enumerate(table.entries):
        label, _ = pipeline.detect_label(entry.text, pipeline.DEFAULT_TAG_PATTERNS)
        lines.append(f"{str_ref}\t{args.language}\t{label}\t{_escape(entry.text)}")
    dump = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(dump, encoding="utf-8")
        print(f"wrote {len(table.entries)} lines to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(dump)
    return 0


def cmd_build(args) -> int:
    run = load_run_config(Path(args.config))
    config: pipeline.PipelineConfig = run["pipeline"]
    if not run["games"]:
        raise _fail("config declares no [[games]]")

    tables: dict[str, list[tlk.TalkTable]] = {lang: [] for lang in config.languages}
    sources: dict[str, dict[str, str]] = {}
    game_ids = []
    for game in run["games"]:
        game_ids.append(game["id"])
        sources[game["id"]] = {}
        for language in config.languages:
            if language not in game["tlk"]:
                raise _fail(f"game {game['id']!r} has no talk table for language {language!r}")
            rel = game["tlk"][language]
            path = Path(rel)
            if not path.is_absolute():
                path = run["config_dir"] / path
            if not path.is_file():
                raise _fail(f"talk table for language {language!r} not found: {path}")
            tables[language].append(_read_table(path, run["codepages"]))
            sources[game["id"]][language] = rel

    records, manifest = pipeline.build_corpus(
        tables, config, game_ids=game_ids, sources=sources
    )
    out_dir = Path(args.out) if args.out else Path(run["out_dir"])
    dataset.export_corpus(records, manifest, out_dir)
    print(f"wrote corpus to {out_dir}", file=sys.stderr)
    sys.stdout.write(json.dumps(manifest.to_dict(), ensure_ascii=False, indent=2) + "\n")
    return 0


def cmd_stats(args) -> int:
    records, _ = dataset.import_corpus(Path(args.corpus))
    stats = dataset.compute_stats(records)
    sys.stdout.write(dataset.render_stats(stats) + "\n")
    return 0


def _split_records(records, language, split):
    return [r for r in records if r.language == language and r.split == split]


def cmd_train_baseline(args) -> int:
    records, _ = dataset.import_corpus(Path(args.corpus))
    languages = {r.language for r in records}
    if args.language not in languages:
        raise _fail(f"language {args.language!r} not in corpus (has {sorted(languages)})")
    train = _split_records(records, args.language, pipeline.TRAIN)
    validation = _split_records(records, args.language, pipeline.VALIDATION)
    test = _split_records(records, args.language, pipeline.TEST)
    if not train or not test:
        raise _fail(f"corpus lacks train or test records for {args.language!r}")

    hp = baseline.Hyperparams(
        learning_rate=args.learning_rate, epochs=args.epochs, l2=args.l2, seed=args.seed
    )
    started = time.monotonic()
    model, vocab = baseline.train_baseline(train, hp, validation=validation)
    print(
        f"trained on {len(train)} sentences, {len(vocab)} features, "
        f"final loss {model.loss_history[-1]:.6f} in {time.monotonic() - started:.1f}s",
        file=sys.stderr,
    )
    baseline.save_model(args.model_out, model, vocab)
    print(f"model written to {args.model_out}", file=sys.stderr)

    report = _evaluate_records(model, vocab, test)
    if args.report_out:
        metrics.write_report(args.report_out, report, config=hp.to_dict())
    sys.stdout.write(metrics.render_report(report) + "\n")
    return 0


def _evaluate_records(model, vocab, records) -> metrics.MetricsReport:
    predictions = [baseline.predict(model, vocab, r.text)[0] for r in records]
    golds = [r.label for r in records]
    return metrics.metrics(metrics.confusion(predictions, golds))


def cmd_evaluate(args) -> int:
    if args.from_report:
        report_dict = json.loads(Path(args.from_report).read_text("utf-8"))
        report = metrics.report_from_dict(report_dict)
        sys.stdout.write(metrics.render_report(report) + "\n")
        for section in ("config", "assumptions"):
            if section in report_dict:
                pairs = ", ".join(f"{k}={v}" for k, v in report_dict[section].items())
                sys.stdout.write(f"{section}: {pairs}\n")
        return 0
    if not (args.model and args.corpus and args.language):
        raise _fail("evaluate needs --model, CORPUS, and --language (or --from-report)")
    model, vocab = baseline.load_model(args.model)
    records, _ = dataset.import_corpus(Path(args.corpus))
    test = _split_records(records, args.language, pipeline.TEST)
    if not test:
        raise _fail(f"no test records for language {args.language!r}")
    report = _evaluate_records(model, vocab, test)
    if args.report_out:
        metrics.write_report(args.report_out, report, config=model.hyperparams.to_dict())
    sys.stdout.write(metrics.render_report(report) + "\n")
    return 0


def cmd_dump_config(args) -> int:
    sys.stdout.write(DEFAULT_CONFIG)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tlkcorpus",
        description="Build labeled multilingual persuasion corpora from game "
                    "talk tables; train and score the baseline classifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="dump one talk table as labeled lines")
    p.add_argument("tlk", help="binary .tlk file or its XML conversion")
    p.add_argument("--language", "-l", default="en", help="language code for the dump")
    p.add_argument("--codepage", help="override the codepage for decoding")
    p.add_argument("--out", "-o", help="write the dump here instead of stdout")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("build", help="build a corpus from a config file")
    p.add_argument("config", help="TOML run configuration")
    p.add_argument("--out", help="output directory (overrides out_dir)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("stats", help="print corpus size statistics")
    p.add_argument("corpus", help="corpus directory")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train-baseline", help="train the baseline classifier")
    p.add_argument("corpus", help="corpus directory")
    p.add_argument("--language", required=True, help="language to train on")
    p.add_argument("--model-out", required=True, help="where to write the model file")
    p.add_argument("--report-out", help="also write the test report as JSON")
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_train_baseline)

    p = sub.add_parser("evaluate", help="score a model on a corpus test split, "
                                        "or pretty-print a stored report")
    p.add_argument("corpus", nargs="?", help="corpus directory")
    p.add_argument("--model", help="baseline model file")
    p.add_argument("--language", help="language to evaluate")
    p.add_argument("--report-out", help="also write the report as JSON")
    p.add_argument("--from-report", help="render an existing report JSON file")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("dump-config", help="print the default config with comments")
    p.set_defaults(func=cmd_dump_config)

    return parser


_ERRORS = (
    CliError,
    tlk.TlkError,
    pipeline.PipelineError,
    dataset.DatasetError,
    baseline.BaselineError,
    metrics.MetricsError,
    OSError,
    json.JSONDecodeError,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
