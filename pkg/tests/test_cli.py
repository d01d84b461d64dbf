import json

import pytest

from conftest import FIXTURES, GOLDEN
from tlkcorpus import cli, metrics
from tlkcorpus.metrics import ClassMetrics, MetricsReport

SEPARABLE = FIXTURES / "separable_corpus"


def make_config(tmp_path, seed=42, languages=("en", "fr", "de", "it", "es"),
                games=("thul", "vexa"), out_dir="corpus"):
    blocks = []
    for game in games:
        tlk_lines = "\n".join(
            f'{lang} = "{FIXTURES / "tlk" / game / (lang + ".tlk")}"' for lang in languages
        )
        blocks.append(f'[[games]]\nid = "{game}"\n[games.tlk]\n{tlk_lines}')
    config = tmp_path / "run.toml"
    config.write_text(
        f"""
languages = {list(languages)!r}
pivot_language = "en"
seed = {seed}
out_dir = "{out_dir}"

{chr(10).join(blocks)}
""",
        encoding="utf-8",
    )
    return config


def read_tree(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


class TestHelp:
    def test_top_level_help_golden(self, capsys, monkeypatch):
        monkeypatch.setenv("COLUMNS", "80")
        with pytest.raises(SystemExit) as exit_info:
            cli.main(["--help"])
        assert exit_info.value.code == 0
        assert capsys.readouterr().out == (GOLDEN / "cli_help.txt").read_text("utf-8")

    @pytest.mark.parametrize("command,flags", [
        ("extract", ["--language", "--codepage", "--out"]),
        ("build", ["--out"]),
        ("stats", []),
        ("train-baseline", ["--language", "--model-out", "--report-out",
                            "--learning-rate", "--epochs", "--l2", "--seed"]),
        ("evaluate", ["--model", "--language", "--report-out", "--from-report"]),
        ("dump-config", []),
    ])
    def test_subcommand_help_enumerates_flags(self, capsys, command, flags):
        with pytest.raises(SystemExit):
            cli.main([command, "--help"])
        out = capsys.readouterr().out
        for flag in ["--help"] + flags:
            assert flag in out


class TestExtract:
    def test_dump_lines(self, capsys):
        assert cli.main(["extract", str(FIXTURES / "tlk/thul/en.tlk")]) == 0
        out = capsys.readouterr().out
        lines = out.splitlines()
        assert lines[0] == "str_ref\tlanguage\tlabel\ttext"
        assert len(lines) == 1 + 30
        assert "persuade" in out and "non_persuade" in out

    def test_bad_magic_exits_nonzero(self, tmp_path, capsys):
        bogus = tmp_path / "bogus.tlk"
        bogus.write_bytes(b"NOPE" + b"\x00" * 40)
        assert cli.main(["extract", str(bogus)]) == 1
        err = capsys.readouterr().err
        assert "not a TLK file" in err
        assert "offset" in err  # parser errors carry the file offset

    def test_xml_auto_detected_same_dump(self, capsys):
        assert cli.main(["extract", str(FIXTURES / "tlk/thul/en.tlk")]) == 0
        from_binary = capsys.readouterr().out
        assert cli.main(["extract", str(FIXTURES / "tlk/thul/en.xml")]) == 0
        from_xml = capsys.readouterr().out
        assert from_xml == from_binary

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "dump.tsv"
        assert cli.main(["extract", str(FIXTURES / "tlk/thul/en.tlk"), "--out", str(target)]) == 0
        assert target.read_text("utf-8").startswith("str_ref\t")
        assert capsys.readouterr().out == ""


class TestBuild:
    def test_two_runs_byte_identical(self, tmp_path, capsys):
        config = make_config(tmp_path)
        assert cli.main(["build", str(config), "--out", str(tmp_path / "one")]) == 0
        manifest_one = capsys.readouterr().out
        assert cli.main(["build", str(config), "--out", str(tmp_path / "two")]) == 0
        manifest_two = capsys.readouterr().out
        assert manifest_one == manifest_two
        assert read_tree(tmp_path / "one") == read_tree(tmp_path / "two")

    def test_missing_language_file_names_language(self, tmp_path, capsys):
        config = tmp_path / "run.toml"
        config.write_text(
            f"""
languages = ["en", "de"]
pivot_language = "en"
[[games]]
id = "thul"
[games.tlk]
en = "{FIXTURES / 'tlk/thul/en.tlk'}"
de = "{tmp_path / 'missing.tlk'}"
""",
            encoding="utf-8",
        )
        assert cli.main(["build", str(config)]) == 1
        assert "'de'" in capsys.readouterr().err

    def test_seed_changes_splits_not_label_counts(self, tmp_path, capsys):
        out42 = tmp_path / "s42"
        out43 = tmp_path / "s43"
        assert cli.main(["build", str(make_config(tmp_path, seed=42)), "--out", str(out42)]) == 0
        capsys.readouterr()
        assert cli.main(["build", str(make_config(tmp_path, seed=43)), "--out", str(out43)]) == 0
        capsys.readouterr()
        man42 = json.loads((out42 / "manifest.json").read_text("utf-8"))
        man43 = json.loads((out43 / "manifest.json").read_text("utf-8"))
        assert man42["line_counts"] == man43["line_counts"]
        assert (out42 / "en-train.jsonl").read_bytes() != (out43 / "en-train.jsonl").read_bytes()

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        config = tmp_path / "run.toml"
        config.write_text('language = ["en"]\n', encoding="utf-8")
        assert cli.main(["build", str(config)]) == 1
        assert "unknown config keys" in capsys.readouterr().err

    def test_config_syntax_error_reports_location(self, tmp_path, capsys):
        config = tmp_path / "run.toml"
        config.write_text('languages = ["en"]\nseed = not-a-number\n', encoding="utf-8")
        assert cli.main(["build", str(config)]) == 1
        assert "line 2" in capsys.readouterr().err


class TestStats:
    def test_minimal_corpus_counts(self, capsys):
        assert cli.main(["stats", str(SEPARABLE)]) == 0
        out = capsys.readouterr().out
        assert "Multilingual (total)" in out
        assert "en" in out and "de" in out

    def test_empty_dir_errors(self, tmp_path, capsys):
        assert cli.main(["stats", str(tmp_path)]) == 1
        assert "manifest" in capsys.readouterr().err


class TestTrainEvaluate:
    def test_train_reports_perfect_accuracy(self, tmp_path, capsys):
        model_path = tmp_path / "model.json"
        report_path = tmp_path / "report.json"
        code = cli.main([
            "train-baseline", str(SEPARABLE), "--language", "en",
            "--model-out", str(model_path), "--report-out", str(report_path),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "Accuracy            1.00" in out
        assert model_path.is_file()
        metrics.validate_report_dict(json.loads(report_path.read_text("utf-8")))

    def test_rerun_identical_stdout(self, tmp_path, capsys):
        args = ["train-baseline", str(SEPARABLE), "--language", "en",
                "--model-out", str(tmp_path / "m.json")]
        assert cli.main(args) == 0
        first = capsys.readouterr().out
        assert cli.main(args) == 0
        second = capsys.readouterr().out
        assert first == second

    def test_absent_language_errors(self, tmp_path, capsys):
        code = cli.main([
            "train-baseline", str(SEPARABLE), "--language", "fr",
            "--model-out", str(tmp_path / "m.json"),
        ])
        assert code == 1
        assert "'fr'" in capsys.readouterr().err

    def test_evaluate_saved_model(self, tmp_path, capsys):
        model_path = tmp_path / "model.json"
        assert cli.main(["train-baseline", str(SEPARABLE), "--language", "en",
                         "--model-out", str(model_path)]) == 0
        capsys.readouterr()
        assert cli.main(["evaluate", str(SEPARABLE), "--model", str(model_path),
                         "--language", "en"]) == 0
        assert "Accuracy            1.00" in capsys.readouterr().out

    def test_evaluate_from_report(self, tmp_path, capsys):
        report = MetricsReport(
            accuracy=0.87, macro_f1=0.79, weighted_f1=0.87,
            persuade=ClassMetrics(0.68, 0.66, 0.67, 236),
            no_persuade=ClassMetrics(0.92, 0.92, 0.92, 950),
        )
        path = tmp_path / "report.json"
        metrics.write_report(path, report, config={"epochs": 5})
        assert cli.main(["evaluate", "--from-report", str(path)]) == 0
        out = capsys.readouterr().out
        assert "Accuracy            0.87" in out
        assert "epochs=5" in out

    def test_evaluate_without_arguments_errors(self, capsys):
        assert cli.main(["evaluate"]) == 1
        assert "evaluate needs" in capsys.readouterr().err


class TestDumpConfig:
    def test_output_is_valid_toml_with_defaults(self, capsys):
        assert cli.main(["dump-config"]) == 0
        out = capsys.readouterr().out
        try:
            import tomllib
        except ImportError:
            import tomli as tomllib
        parsed = tomllib.loads(out)
        assert parsed["languages"] == ["en"]
        assert parsed["seed"] == 42
        assert parsed["split_fractions"] == [0.7, 0.15, 0.15]

    def test_dump_round_trips_through_loader(self, tmp_path, capsys):
        assert cli.main(["dump-config"]) == 0
        config = tmp_path / "defaults.toml"
        config.write_text(capsys.readouterr().out, encoding="utf-8")
        run = cli.load_run_config(config)
        assert run["pipeline"].seed == 42
        assert run["baseline"].epochs == 200
