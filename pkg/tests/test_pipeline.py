import warnings

import pytest
from hypothesis import given, settings, strategies as st

from tlkcorpus import pipeline, tlk
from tlkcorpus.pipeline import (
    NON_PERSUADE,
    PERSUADE,
    AlignedLine,
    DialogLine,
    PipelineConfig,
    assign_splits,
    balance,
    build_corpus,
    detect_label,
    filter_developer_comments,
    sentence_tokenize,
    strip_tags_and_markup,
)

TAGS = pipeline.DEFAULT_TAG_PATTERNS


def line(str_ref, raw, language="en", game_id="g0"):
    label, tags = detect_label(raw, TAGS)
    return DialogLine(
        str_ref=str_ref,
        game_id=game_id,
        language=language,
        raw_text=raw,
        clean_text=strip_tags_and_markup(raw),
        label=label,
        matched_tags=tags,
    )


class TestDetectLabel:
    def test_plain_tag(self):
        assert detect_label("[Persuade] Come on, what harm is there in telling me?", TAGS) == (
            PERSUADE, ("Persuade",)
        )

    def test_hybrid_tag_normalizes(self):
        assert detect_label("[Persuade/Lie] I had nothing to do with it.", TAGS) == (
            PERSUADE, ("Persuade",)
        )

    def test_untagged_line(self):
        text = ("After I overheard the deal they made with Lorso in the Czerka offices, "
                "I confronted them. When they tried to run, I chased them down and killed them.")
        assert detect_label(text, TAGS) == (NON_PERSUADE, ())

    def test_persuasion_variant_and_case(self):
        assert detect_label("[Persuasion] Let me through.", TAGS)[0] == PERSUADE
        assert detect_label("[persuade] Let me through.", TAGS)[0] == PERSUADE

    def test_unrelated_bracket_tag(self):
        assert detect_label("[Intimidate] Move.", TAGS) == (NON_PERSUADE, ())

    def test_multiple_matches_all_recorded(self):
        label, tags = detect_label("[Persuade] one [Persuade/Lie] two", TAGS)
        assert label == PERSUADE
        assert tags == ("Persuade", "Persuade")


class TestStrip:
    def test_tag_removed(self):
        assert strip_tags_and_markup("[Persuade] What other choice do you have?") == \
            "What other choice do you have?"

    def test_markup_remnant_removed(self):
        assert strip_tags_and_markup("Hello.</string>") == "Hello."

    def test_empty(self):
        assert strip_tags_and_markup("") == ""

    def test_whitespace_collapsed(self):
        assert strip_tags_and_markup("  a \t b\n c ") == "a b c"

    def test_no_tag_substring_survives(self):
        cleaned = strip_tags_and_markup("[Persuade/Lie] go [Persuasion] now")
        for pattern in TAGS:
            assert detect_label(cleaned, (pattern,))[0] == NON_PERSUADE


class TestFilterComments:
    def test_default_denylist_drops_comment(self):
        lines = [line(0, "DO NOT TRANSLATE - temp string", language="de")]
        kept, dropped = filter_developer_comments(lines, pipeline.DEFAULT_COMMENT_DENYLIST)
        assert kept == [] and len(dropped) == 1

    def test_real_translation_kept(self):
        text = ("Ihr werdet feststellen, dass ich jeder Sache sehr ergeben bin... "
                "wenn die Bezahlung stimmt.")
        kept, dropped = filter_developer_comments(
            [line(0, text, language="de")], pipeline.DEFAULT_COMMENT_DENYLIST
        )
        assert len(kept) == 1 and dropped == []

    def test_empty_denylist_keeps_everything(self):
        lines = [line(0, "DO NOT TRANSLATE - temp string"), line(1, "placeholder text")]
        kept, dropped = filter_developer_comments(lines, ())
        assert kept == lines and dropped == []


class TestAlign:
    def cfg(self, languages=("en", "de")):
        return PipelineConfig(languages=languages, pivot_language="en")

    def test_intersection(self):
        per = {
            "en": [line(r, f"english {r}.") for r in (1, 2, 3)],
            "de": [line(r, f"deutsch {r}.", language="de") for r in (2, 3, 4)],
        }
        aligned = pipeline.align(per, self.cfg())
        assert [a.str_ref for a in aligned] == [2, 3]

    def test_pivot_label_propagates(self):
        per = {
            "en": [line(0, "[Persuade] Trust me.")],
            "de": [line(0, "Vertraut mir.", language="de")],
        }
        aligned = pipeline.align(per, self.cfg())
        assert aligned[0].label == PERSUADE
        assert aligned[0].texts == {"en": "Trust me.", "de": "Vertraut mir."}

    def test_single_language_identity(self):
        per = {"en": [line(0, "One."), line(1, ""), line(2, "Two.")]}
        aligned = pipeline.align(per, self.cfg(languages=("en",)))
        assert [a.str_ref for a in aligned] == [0, 2]  # empty line excluded

    def test_empty_text_in_any_language_excludes(self):
        per = {
            "en": [line(0, "Hello.")],
            "de": [line(0, "", language="de")],
        }
        assert pipeline.align(per, self.cfg()) == []

    def test_duplicate_strref(self):
        per = {"en": [line(0, "a."), line(0, "b.")]}
        with pytest.raises(pipeline.DuplicateStrRefError):
            pipeline.align(per, self.cfg(languages=("en",)))

    def test_games_are_namespaced(self):
        per = {
            "en": [line(0, "Game zero.", game_id="g0"), line(0, "Game one.", game_id="g1")],
            "de": [line(0, "Spiel null.", language="de", game_id="g0")],
        }
        aligned = pipeline.align(per, self.cfg())
        assert [(a.game_id, a.str_ref) for a in aligned] == [("g0", 0)]


class TestSentenceTokenize:
    def test_two_sentences(self):
        text = ("After I overheard the deal they made with Lorso in the Czerka offices, "
                "I confronted them. When they tried to run, I chased them down and killed them.")
        assert len(sentence_tokenize(text, "en")) == 2

    def test_single_sentence(self):
        assert sentence_tokenize("You didn't see anything.", "en") == ["You didn't see anything."]

    def test_abbreviation_protected(self):
        assert sentence_tokenize("Mr. Smith arrived. He left.", "en") == [
            "Mr. Smith arrived.", "He left.",
        ]

    def test_ellipsis_before_lowercase_does_not_split(self):
        text = ("Ihr werdet feststellen, dass ich jeder Sache sehr ergeben bin... "
                "wenn die Bezahlung stimmt.")
        assert sentence_tokenize(text, "de") == [text]

    def test_ellipsis_before_uppercase_splits(self):
        assert sentence_tokenize("Wait... Nobody move!", "en") == ["Wait...", "Nobody move!"]

    def test_question_and_exclamation(self):
        assert sentence_tokenize("Who are you? Stop! Answer me.", "en") == [
            "Who are you?", "Stop!", "Answer me.",
        ]

    def test_opening_quote_starts_sentence(self):
        got = sentence_tokenize('He said no. "Leave now." So we left.', "en")
        assert got[0] == "He said no."
        assert got[1].startswith('"Leave')

    def test_spanish_inverted_punctuation(self):
        got = sentence_tokenize("Confía en mí. ¿Vale?", "es")
        assert got == ["Confía en mí.", "¿Vale?"]

    def test_whitespace_only(self):
        assert sentence_tokenize("   ", "en") == []
        assert sentence_tokenize("", "en") == []

    def test_delimiters_retained(self):
        for sentence in sentence_tokenize("One. Two! Three?", "en"):
            assert sentence[-1] in ".!?"

    @given(st.lists(st.sampled_from(
        ["Trust me.", "We go now!", "Why?", "Mr. Vane waits.", "The gate... It is open."]
    ), min_size=1, max_size=6))
    @settings(max_examples=100, deadline=None)
    def test_conservation(self, parts):
        text = " ".join(parts)
        joined = " ".join(sentence_tokenize(text, "en"))
        assert " ".join(joined.split()) == " ".join(text.split())


def aligned_lines(n_persuade, n_non, game_id="g0"):
    lines = []
    for i in range(n_persuade + n_non):
        label = PERSUADE if i < n_persuade else NON_PERSUADE
        lines.append(AlignedLine(str_ref=i, game_id=game_id, label=label,
                                 texts={"en": f"line {i}."}))
    return lines


class TestBalance:
    def test_floor_formula(self):
        out = balance(aligned_lines(100, 1000), 0.2, seed=42)
        labels = [l.label for l in out]
        assert labels.count(PERSUADE) == 100
        assert labels.count(NON_PERSUADE) == 400

    def test_empty_class(self):
        with pytest.raises(pipeline.EmptyClassError):
            balance(aligned_lines(0, 10), 0.2, seed=42)
        with pytest.raises(pipeline.EmptyClassError):
            balance(aligned_lines(10, 0), 0.2, seed=42)

    def test_already_at_target_returns_unchanged_with_warning(self):
        lines = aligned_lines(10, 10)
        with pytest.warns(pipeline.InfeasibleFractionWarning):
            out = balance(lines, 0.5, seed=42)
        assert out == lines

    def test_deterministic_and_order_independent(self):
        lines = aligned_lines(10, 90)
        out1 = balance(lines, 0.2, seed=42)
        out2 = balance(list(reversed(lines)), 0.2, seed=42)
        assert out1 == out2

    def test_seed_changes_selection_not_counts(self):
        lines = aligned_lines(10, 90)
        out1 = balance(lines, 0.2, seed=42)
        out2 = balance(lines, 0.2, seed=43)
        assert [l.label for l in out1].count(NON_PERSUADE) == 40
        assert [l.label for l in out2].count(NON_PERSUADE) == 40
        assert out1 != out2

    @pytest.mark.parametrize("n_persuade,n_non,fraction", [
        (10, 200, 0.2), (7, 311, 0.15), (33, 400, 0.25), (5, 99, 0.3),
    ])
    def test_balance_bound(self, n_persuade, n_non, fraction):
        out = balance(aligned_lines(n_persuade, n_non), fraction, seed=1)
        share = n_persuade / len(out)
        assert abs(share - fraction) <= 1.0 / len(out)


class TestAssignSplits:
    def test_exact_counts(self):
        split_of = assign_splits(aligned_lines(20, 80), (0.70, 0.15, 0.15), seed=42)
        counts = {s: list(split_of.values()).count(s) for s in pipeline.SPLITS}
        assert counts == {"train": 70, "validation": 15, "test": 15}

    def test_deterministic(self):
        lines = aligned_lines(5, 45)
        assert assign_splits(lines, (0.70, 0.15, 0.15), 42) == \
            assign_splits(lines, (0.70, 0.15, 0.15), 42)

    def test_remainder_goes_to_train(self):
        split_of = assign_splits(aligned_lines(2, 5), (0.70, 0.15, 0.15), seed=42)
        counts = {s: list(split_of.values()).count(s) for s in pipeline.SPLITS}
        assert counts == {"train": 5, "validation": 1, "test": 1}

    def test_empty_input(self):
        with pytest.raises(pipeline.EmptyInputError):
            assign_splits([], (0.70, 0.15, 0.15), seed=42)


class TestConfig:
    def test_defaults_valid(self):
        cfg = PipelineConfig()
        assert cfg.persuade_fraction == 0.20
        assert cfg.split_fractions == (0.70, 0.15, 0.15)
        assert cfg.seed == 42

    @pytest.mark.parametrize("kwargs", [
        {"languages": ()},
        {"languages": ("en", "en")},
        {"pivot_language": "xx"},
        {"persuade_fraction": 0.0},
        {"persuade_fraction": 1.0},
        {"split_fractions": (0.5, 0.5)},
        {"split_fractions": (0.5, 0.4, 0.2)},
        {"split_fractions": (1.0, -0.5, 0.5)},
        {"tag_patterns": ()},
    ])
    def test_invalid_configs_rejected(self, kwargs):
        with pytest.raises(pipeline.ConfigError):
            PipelineConfig(**kwargs)

    def test_snapshot_round_trip(self):
        cfg = PipelineConfig(languages=("en", "de"), pivot_language="de", seed=7)
        assert PipelineConfig.from_snapshot(cfg.to_snapshot()) == cfg


def table_of(texts, language_id=0):
    return tlk.TalkTable(language_id=language_id,
                         entries=[tlk.TlkEntry.of_text(t) for t in texts])


class TestBuildCorpus:
    def test_single_persuade_line_inherits_label_and_split(self):
        cfg = PipelineConfig(languages=("en",))
        with pytest.warns(pipeline.InfeasibleFractionWarning):
            records, manifest = build_corpus(
                {"en": [table_of(["[Persuade] Trust me. I mean it."])]}, cfg
            )
        assert len(records) == 2
        assert all(r.label == PERSUADE for r in records)
        assert len({r.split for r in records}) == 1
        assert manifest.line_counts == {PERSUADE: 1, NON_PERSUADE: 0}

    def test_deterministic(self):
        texts = ["[Persuade] Trust me."] + [f"Plain line number {i}." for i in range(20)]
        cfg = PipelineConfig(languages=("en",))
        a = build_corpus({"en": [table_of(texts)]}, cfg)
        b = build_corpus({"en": [table_of(texts)]}, cfg)
        assert a[0] == b[0]
        assert a[1].to_dict() == b[1].to_dict()

    def test_comment_dropped_for_all_languages(self):
        en = table_of(["Hello there.", "Stay away."])
        de = table_of(["Hallo.", "DO NOT TRANSLATE - temp string"], language_id=2)
        cfg = PipelineConfig(languages=("en", "de"))
        per = {
            lang: pipeline.lines_from_table(t, lang, "g0", cfg)
            for lang, t in (("en", en), ("de", de))
        }
        kept, dropped = filter_developer_comments(per["de"], cfg.comment_denylist)
        assert [l.str_ref for l in dropped] == [1]
        with pytest.warns(pipeline.InfeasibleFractionWarning):
            records, _ = build_corpus({"en": [en], "de": [de]}, cfg, game_ids=["g0"])
        assert {(r.game_id, r.str_ref) for r in records} == {("g0", 0)}

    def test_missing_language_rejected(self):
        cfg = PipelineConfig(languages=("en", "de"))
        with pytest.raises(pipeline.PipelineError):
            build_corpus({"en": [table_of(["Hi."])]}, cfg)

    def test_mismatched_table_counts_rejected(self):
        cfg = PipelineConfig(languages=("en", "de"))
        with pytest.raises(pipeline.PipelineError):
            build_corpus({"en": [table_of(["Hi."])], "de": []}, cfg)

    def test_sentences_are_tag_free_and_share_line_split(self):
        texts = (
            ["[Persuade] Give me the key. The gold is yours."]
            + [f"The corridor {i} is long. It winds down." for i in range(12)]
        )
        cfg = PipelineConfig(languages=("en",), persuade_fraction=0.2)
        records, _ = build_corpus({"en": [table_of(texts)]}, cfg)
        per_line = {}
        for r in records:
            assert "[" not in r.text and "]" not in r.text
            per_line.setdefault((r.game_id, r.str_ref), set()).add((r.label, r.split))
        assert all(len(v) == 1 for v in per_line.values())
