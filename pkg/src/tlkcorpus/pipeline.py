"""Turns per-language talk tables into a labeled, aligned, split corpus.

The stages, in composition order: label detection from bracketed skill tags,
tag/markup stripping, developer-comment filtering, StrRef alignment across
languages, class balancing, split assignment, sentence tokenization. Every
stage is a pure function; the whole build is deterministic given the inputs,
the configuration, and the seed.

Labels are decided in one pivot language (default English) and propagated to
every other language of the same line through the StrRef, so a line carries
the same label in all its translations no matter how the localizers handled
the tag markers.
"""

from __future__ import annotations

import math
import re
import warnings as _warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .prng import SplitMix64
from .tlk import TalkTable

PERSUADE = "persuade"
NON_PERSUADE = "non_persuade"
LABELS = (PERSUADE, NON_PERSUADE)

TRAIN = "train"
VALIDATION = "validation"
TEST = "test"
SPLITS = (TRAIN, VALIDATION, TEST)

MANIFEST_FORMAT = "tlkcorpus-corpus/1"


class PipelineError(Exception):
    pass


class ConfigError(PipelineError):
    pass


class DuplicateStrRefError(PipelineError):
    pass


class EmptyClassError(PipelineError):
    pass


class EmptyInputError(PipelineError):
    pass


class InfeasibleFractionWarning(UserWarning):
    """Requested persuade fraction is at or below what the data already has,
    so there is nothing to subsample and the input is returned unchanged."""


@dataclass(frozen=True)
class TagPattern:
    """One skill-tag matcher: a regex over the raw line text plus the
    canonical tag name recorded for every match. Hybrid markers such as
    [Persuade/Lie] normalize to the plain canonical name."""

    regex: str
    tag: str


# Matches [Persuade], [Persuasion], and hybrids like [Persuade/Lie],
# case-insensitively, anywhere in the line.
DEFAULT_TAG_PATTERNS = (
    TagPattern(regex=r"(?i)\[\s*persua(?:de|sion)\b[^\]]*\]", tag="Persuade"),
)

# Non-pivot lines matching any of these are developer comments that leaked
# into shipped localizations; they are dropped for every language.
DEFAULT_COMMENT_DENYLIST = (
    r"(?i)do not translate",
    r"(?i)placeholder",
)


@dataclass(frozen=True)
class PipelineConfig:
    languages: tuple[str, ...] = ("en",)
    pivot_language: str = "en"
    tag_patterns: tuple[TagPattern, ...] = DEFAULT_TAG_PATTERNS
    comment_denylist: tuple[str, ...] = DEFAULT_COMMENT_DENYLIST
    persuade_fraction: float = 0.20
    split_fractions: tuple[float, float, float] = (0.70, 0.15, 0.15)
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(self, "languages", tuple(self.languages))
        object.__setattr__(
            self,
            "tag_patterns",
            tuple(
                p if isinstance(p, TagPattern) else TagPattern(**dict(p))
                for p in self.tag_patterns
            ),
        )
        object.__setattr__(self, "comment_denylist", tuple(self.comment_denylist))
        object.__setattr__(self, "split_fractions", tuple(self.split_fractions))
        if not self.languages:
            raise ConfigError("languages must be non-empty")
        if len(set(self.languages)) != len(self.languages):
            raise ConfigError("languages contain duplicates")
        if self.pivot_language not in self.languages:
            raise ConfigError(
                f"pivot_language {self.pivot_language!r} not in languages {self.languages}"
            )
        if not self.tag_patterns:
            raise ConfigError("tag_patterns must be non-empty")
        if not 0.0 < self.persuade_fraction < 1.0:
            raise ConfigError(f"persuade_fraction must be in (0,1): {self.persuade_fraction}")
        if len(self.split_fractions) != 3:
            raise ConfigError("split_fractions must be (train, validation, test)")
        if any(not 0.0 < f < 1.0 for f in self.split_fractions):
            raise ConfigError(f"split fractions must each be in (0,1): {self.split_fractions}")
        if abs(sum(self.split_fractions) - 1.0) > 1e-9:
            raise ConfigError(f"split fractions must sum to 1.0: {self.split_fractions}")

    def to_snapshot(self) -> dict:
        """JSON-able snapshot of every field, embedded in manifests."""
        return {
            "languages": list(self.languages),
            "pivot_language": self.pivot_language,
            "tag_patterns": [{"regex": p.regex, "tag": p.tag} for p in self.tag_patterns],
            "comment_denylist": list(self.comment_denylist),
            "persuade_fraction": self.persuade_fraction,
            "split_fractions": list(self.split_fractions),
            "seed": self.seed,
        }

    @classmethod
    def from_snapshot(cls, snap: Mapping) -> "PipelineConfig":
        return cls(
            languages=tuple(snap["languages"]),
            pivot_language=snap["pivot_language"],
            tag_patterns=tuple(TagPattern(**p) for p in snap["tag_patterns"]),
            comment_denylist=tuple(snap["comment_denylist"]),
            persuade_fraction=snap["persuade_fraction"],
            split_fractions=tuple(snap["split_fractions"]),
            seed=snap["seed"],
        )


@dataclass(frozen=True)
class DialogLine:
    str_ref: int
    game_id: str
    language: str
    raw_text: str
    clean_text: str
    label: str
    matched_tags: tuple[str, ...]

    @property
    def key(self) -> tuple[str, int]:
        return (self.game_id, self.str_ref)


@dataclass(frozen=True)
class AlignedLine:
    str_ref: int
    game_id: str
    label: str
    texts: Mapping[str, str]

    @property
    def key(self) -> tuple[str, int]:
        return (self.game_id, self.str_ref)


@dataclass(frozen=True)
class SentenceRecord:
    str_ref: int
    game_id: str
    language: str
    sentence_index: int
    text: str
    label: str
    split: str


@dataclass
class DatasetManifest:
    """Reproducibility record written next to an exported corpus: the exact
    configuration and seed, the source games, and every count needed to audit
    the record files."""

    format_version: str
    seed: int
    config: dict
    game_sources: dict
    line_counts: dict
    sentence_counts: dict

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "seed": self.seed,
            "config": self.config,
            "game_sources": self.game_sources,
            "line_counts": self.line_counts,
            "sentence_counts": self.sentence_counts,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "DatasetManifest":
        return cls(**{k: d[k] for k in (
            "format_version", "seed", "config", "game_sources",
            "line_counts", "sentence_counts",
        )})


@lru_cache(maxsize=256)
def _compiled(regex: str) -> re.Pattern:
    return re.compile(regex)


def detect_label(raw_text: str, tag_patterns: Sequence[TagPattern]) -> tuple[str, tuple[str, ...]]:
    """Label a raw line from its bracketed skill tags.

    Total function: returns (persuade, canonical tags) when any pattern
    matches, else (non_persuade, ()).
    """
    tags = []
    for pattern in tag_patterns:
        for _ in _compiled(pattern.regex).finditer(raw_text):
            tags.append(pattern.tag)
    if tags:
        return PERSUADE, tuple(tags)
    return NON_PERSUADE, ()


_BRACKETED = re.compile(r"\[[^\[\]]*\]")
_MARKUP = re.compile(r"</?[A-Za-z][^<>]*>")


def strip_tags_and_markup(raw_text: str) -> str:
    """Remove bracketed skill tags and stray markup, collapse whitespace."""
    text = _BRACKETED.sub(" ", raw_text)
    text = _MARKUP.sub(" ", text)
    return " ".join(text.split())


def filter_developer_comments(
    lines: Sequence[DialogLine], denylist: Sequence[str]
) -> tuple[list[DialogLine], list[DialogLine]]:
    """Split lines into (kept, dropped) by the developer-comment denylist.

    Matching is against the raw text; callers must drop the returned StrRefs
    from every language, not just the one that matched.
    """
    patterns = [_compiled(p) for p in denylist]
    kept, dropped = [], []
    for line in lines:
        if any(p.search(line.raw_text) for p in patterns):
            dropped.append(line)
        else:
            kept.append(line)
    return kept, dropped


def lines_from_table(
    table: TalkTable, language: str, game_id: str, config: PipelineConfig
) -> list[DialogLine]:
    """One DialogLine per table entry, labeled and cleaned."""
    lines = []
    for str_ref, entry in enumerate(table.entries):
        label, tags = detect_label(entry.text, config.tag_patterns)
        lines.append(
            DialogLine(
                str_ref=str_ref,
                game_id=game_id,
                language=language,
                raw_text=entry.text,
                clean_text=strip_tags_and_markup(entry.text),
                label=label,
                matched_tags=tags,
            )
        )
    return lines


def align(
    per_language_lines: Mapping[str, Sequence[DialogLine]], config: PipelineConfig
) -> list[AlignedLine]:
    """Join lines across languages on (game, StrRef).

    Keeps exactly the keys present in every configured language, drops lines
    that are empty after cleaning in any language, and takes the label from
    the pivot language. Output is sorted by (game, StrRef).
    """
    by_language: dict[str, dict[tuple[str, int], DialogLine]] = {}
    for language in config.languages:
        if language not in per_language_lines:
            raise PipelineError(f"no lines supplied for configured language {language!r}")
        table: dict[tuple[str, int], DialogLine] = {}
        for line in per_language_lines[language]:
            if line.key in table:
                raise DuplicateStrRefError(
                    f"StrRef {line.str_ref} appears twice in {language}/{line.game_id}"
                )
            table[line.key] = line
        by_language[language] = table

    common = set(by_language[config.languages[0]])
    for language in config.languages[1:]:
        common &= set(by_language[language])

    aligned = []
    for key in sorted(common):
        versions = {lang: by_language[lang][key] for lang in config.languages}
        if any(not v.clean_text for v in versions.values()):
            continue
        pivot = versions[config.pivot_language]
        aligned.append(
            AlignedLine(
                str_ref=key[1],
                game_id=key[0],
                label=pivot.label,
                texts={lang: versions[lang].clean_text for lang in config.languages},
            )
        )
    return aligned


# Sentence boundary: a run of terminal punctuation (ellipsis included),
# optional closing quotes/brackets, then whitespace. The split is confirmed
# only when the next character opens a sentence (uppercase or an opening
# quote mark), which keeps "bin... wenn" style continuations intact.
_BOUNDARY = re.compile(r"([.!?…]+[\"'”’»)\]]*)(\s+)")
_LAST_WORD = re.compile(r"([\w']+)$", re.UNICODE)
_OPENERS = set("\"'“‘«¿¡([")

ABBREVIATIONS: dict[str, frozenset[str]] = {
    "en": frozenset(
        "mr mrs ms dr st prof gen col sgt lt capt cpl maj rev hon jr sr vs etc".split()
    ),
    "de": frozenset("hr fr dr prof nr bzw usw ca inkl zzgl".split()),
    "fr": frozenset("m mr mme mlle dr st".split()),
    "es": frozenset("sr sra srta dr dra ud uds".split()),
    "it": frozenset("sig dott prof ing".split()),
}


def sentence_tokenize(text: str, language: str) -> list[str]:
    """Split cleaned line text into sentences, keeping the delimiters.

    Joining the result with single spaces and collapsing whitespace gives
    back the input with collapsed whitespace; whitespace-only input gives [].
    """
    abbrevs = ABBREVIATIONS.get(language, frozenset())
    sentences = []
    start = 0
    for m in _BOUNDARY.finditer(text):
        if m.end() >= len(text):
            break
        nxt = text[m.end()]
        if not (nxt.isupper() or nxt in _OPENERS):
            continue
        if m.group(1) == ".":
            # A lone period after an abbreviation or a single-letter initial
            # does not end the sentence.
            w = _LAST_WORD.search(text, start, m.start())
            if w is not None:
                word = w.group(1)
                if word.lower() in abbrevs or (len(word) == 1 and word.isalpha()):
                    continue
        sentences.append(text[start:m.end(1)])
        start = m.end()
    sentences.append(text[start:])
    return [s for s in (piece.strip() for piece in sentences) if s]


def _decimal_fraction(f: float) -> Fraction:
    # Config fractions are human decimals like 0.2; rationalizing them keeps
    # floor arithmetic exact (floor(100 * 0.8 / 0.2) must be 400, not 399).
    return Fraction(f).limit_denominator(10**6)


def _line_key(line: AlignedLine) -> tuple[str, int]:
    return (line.game_id, line.str_ref)


def balance(
    aligned: Sequence[AlignedLine], persuade_fraction: float, seed: int
) -> list[AlignedLine]:
    """Subsample non-persuade lines so persuade/total approximates the target.

    All persuade lines are kept; floor(P * (1-f) / f) non-persuade lines are
    drawn without replacement from the "balance" stream. Selection works on
    whole aligned lines, so every language keeps identical StrRefs. When the
    data is already at or above the target fraction the input is returned
    unchanged with a warning.
    """
    lines = list(aligned)
    persuade = [l for l in lines if l.label == PERSUADE]
    non_persuade = [l for l in lines if l.label == NON_PERSUADE]
    if not persuade or not non_persuade:
        missing = PERSUADE if not persuade else NON_PERSUADE
        raise EmptyClassError(f"cannot balance: no {missing} lines")
    f = _decimal_fraction(persuade_fraction)
    target = math.floor(len(persuade) * (1 - f) / f)
    if target >= len(non_persuade):
        _warnings.warn(
            InfeasibleFractionWarning(
                f"persuade share {len(persuade)}/{len(lines)} already at or above "
                f"{persuade_fraction}; keeping all lines"
            )
        )
        return lines
    rng = SplitMix64.for_stream(seed, "balance")
    kept_non = rng.sample(sorted(non_persuade, key=_line_key), target)
    return sorted(persuade + kept_non, key=_line_key)


def assign_splits(
    aligned: Sequence[AlignedLine],
    split_fractions: Sequence[float],
    seed: int,
) -> dict[tuple[str, int], str]:
    """Map every (game, StrRef) to train/validation/test.

    Keys are sorted, shuffled with the "split" stream, then partitioned into
    floor(n * fraction) chunks with the remainder going to train. Assignment
    is per line, so all sentences and all languages of a StrRef share one
    split.
    """
    keys = sorted({line.key for line in aligned})
    if not keys:
        raise EmptyInputError("no lines to split")
    rng = SplitMix64.for_stream(seed, "split")
    rng.shuffle(keys)
    n = len(keys)
    counts = [math.floor(n * _decimal_fraction(f)) for f in split_fractions]
    counts[0] += n - sum(counts)
    assignment = {}
    at = 0
    for split, count in zip(SPLITS, counts):
        for key in keys[at:at + count]:
            assignment[key] = split
        at += count
    return assignment


def build_corpus(
    tables: Mapping[str, Sequence[TalkTable]],
    config: PipelineConfig,
    game_ids: Sequence[str] | None = None,
    sources: Mapping[str, Mapping[str, str]] | None = None,
) -> tuple[list[SentenceRecord], DatasetManifest]:
    """Run the full pipeline over one table per (language, game).

    ``tables`` maps each configured language to its talk tables in game
    order; ``game_ids`` names the games (defaults to game0, game1, ...).
    StrRefs are namespaced by game, and alignment happens within a game only.
    Returns the sentence records sorted by (language, game, StrRef, sentence)
    plus the manifest that makes the build auditable.
    """
    for language in config.languages:
        if language not in tables:
            raise PipelineError(f"no talk table supplied for language {language!r}")
    n_games = len(tables[config.languages[0]])
    if n_games == 0:
        raise EmptyInputError("at least one talk table per language is required")
    for language in config.languages:
        if len(tables[language]) != n_games:
            raise PipelineError(
                f"language {language!r} has {len(tables[language])} tables, expected {n_games}"
            )
    if game_ids is None:
        game_ids = [f"game{i}" for i in range(n_games)]
    elif len(game_ids) != n_games:
        raise PipelineError(f"{len(game_ids)} game ids for {n_games} tables")

    per_language: dict[str, list[DialogLine]] = {}
    for language in config.languages:
        lines: list[DialogLine] = []
        for game_id, table in zip(game_ids, tables[language]):
            lines.extend(lines_from_table(table, language, game_id, config))
        per_language[language] = lines

    dropped_keys: set[tuple[str, int]] = set()
    for language in config.languages:
        if language == config.pivot_language:
            continue
        kept, dropped = filter_developer_comments(per_language[language], config.comment_denylist)
        per_language[language] = kept
        dropped_keys.update(line.key for line in dropped)
    if dropped_keys:
        for language in config.languages:
            per_language[language] = [
                line for line in per_language[language] if line.key not in dropped_keys
            ]

    aligned = align(per_language, config)
    if len({line.label for line in aligned}) < 2:
        # Degenerate corpora (one label) still build; there is just nothing
        # to subsample.
        _warnings.warn(InfeasibleFractionWarning("only one label present; balancing skipped"))
        balanced = aligned
    else:
        balanced = balance(aligned, config.persuade_fraction, config.seed)
    split_of = assign_splits(balanced, config.split_fractions, config.seed)

    records = []
    for line in balanced:
        split = split_of[line.key]
        for language in config.languages:
            for index, sentence in enumerate(sentence_tokenize(line.texts[language], language)):
                records.append(
                    SentenceRecord(
                        str_ref=line.str_ref,
                        game_id=line.game_id,
                        language=language,
                        sentence_index=index,
                        text=sentence,
                        label=line.label,
                        split=split,
                    )
                )
    records.sort(key=lambda r: (r.language, r.game_id, r.str_ref, r.sentence_index))

    line_counts = Counter(line.label for line in balanced)
    sentence_counts: dict[str, dict[str, dict[str, int]]] = {
        language: {split: {label: 0 for label in LABELS} for split in SPLITS}
        for language in config.languages
    }
    for record in records:
        sentence_counts[record.language][record.split][record.label] += 1

    manifest = DatasetManifest(
        format_version=MANIFEST_FORMAT,
        seed=config.seed,
        config=config.to_snapshot(),
        game_sources=(
            {gid: dict(sources.get(gid, {})) for gid in game_ids}
            if sources is not None
            else {gid: {} for gid in game_ids}
        ),
        line_counts={label: line_counts.get(label, 0) for label in LABELS},
        sentence_counts=sentence_counts,
    )
    return records, manifest
