"""Phrase alignment across comparable corpora.

Two phrases align when they hold the same number of open-class words and those words can
be paired one-to-one so that every source lemma translates to its partner.
"""

from __future__ import annotations

import itertools
import logging
import typing
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, TextIO

from phrasesense.chunker import PhraseEntry
from phrasesense.errors import DataError, InvariantError, open_text

logger = logging.getLogger(__name__)


class HasOpenClassLemmas(Protocol):
    @property
    def open_class_lemmas(self) -> Sequence[str]: ...


@dataclass(frozen=True)
class BilingualDictionary:
    """Many-to-many translations between lowercase lemmas."""

    translations: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for source, targets in self.translations.items():
            for lemma in (source, *targets):
                if not lemma or lemma != lemma.lower():
                    raise InvariantError(f"dictionary lemmas must be lowercase: {lemma!r}")

    def translate(self, lemma: str) -> frozenset[str]:
        return self.translations.get(lemma, frozenset())

    def inverse(self) -> BilingualDictionary:
        inverse: dict[str, set[str]] = {}
        for source, targets in self.translations.items():
            for target in targets:
                inverse.setdefault(target, set()).add(source)
        return BilingualDictionary({lemma: frozenset(items) for lemma, items in inverse.items()})

    def with_entry(self, source: str, target: str) -> BilingualDictionary:
        translations = dict(self.translations)
        translations[source] = self.translate(source) | {target}
        return BilingualDictionary(translations)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> BilingualDictionary:
        translations: dict[str, set[str]] = {}
        for source, target in pairs:
            translations.setdefault(source.lower(), set()).add(target.lower())
        return cls({lemma: frozenset(items) for lemma, items in translations.items()})

    @classmethod
    def load(cls, path: Path) -> BilingualDictionary:
        """Read `source_lemma<TAB>target_lemma` lines."""
        pairs = []
        with open_text(path) as f:
            for number, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 2 or not fields[0] or not fields[1]:
                    raise DataError(f"{path}:{number}: expected `source<TAB>target`")
                pairs.append((fields[0], fields[1]))
        dictionary = cls.from_pairs(pairs)
        logger.info("Loaded %d dictionary pairs from %s", len(pairs), path)
        return dictionary


class Alignment(typing.NamedTuple):
    target_key: str
    frequency: int
    target_lemmas: tuple[str, ...]
    """Open-class lemmas of the target phrase, in phrase order."""


@dataclass(frozen=True)
class AlignmentTable:
    """Aligned target phrases per source phrase key, most frequent first."""

    entries: Mapping[str, tuple[Alignment, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for source, alignments in self.entries.items():
            for alignment in alignments:
                if alignment.frequency < 1:
                    raise InvariantError(
                        f"alignment `{source}` -> `{alignment.target_key}` has frequency "
                        f"{alignment.frequency}"
                    )

    def alignments(self, source_key: str) -> tuple[Alignment, ...]:
        return self.entries.get(source_key, ())

    def source_keys(self) -> list[str]:
        return sorted(self.entries)

    def frequencies(self) -> set[int]:
        return {a.frequency for alignments in self.entries.values() for a in alignments}

    def __len__(self) -> int:
        return sum(len(alignments) for alignments in self.entries.values())

    def __iter__(self) -> typing.Iterator[tuple[str, Alignment]]:
        for source in self.source_keys():
            for alignment in self.entries[source]:
                yield source, alignment

    def write(self, stream: TextIO) -> None:
        """Write `source<TAB>target<TAB>frequency<TAB>lemmas`, by source then frequency."""
        for source, alignment in self:
            lemmas = " ".join(alignment.target_lemmas)
            stream.write(f"{source}\t{alignment.target_key}\t{alignment.frequency}\t{lemmas}\n")

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[str, str, int, Sequence[str]]]) -> AlignmentTable:
        entries: dict[str, list[Alignment]] = {}
        for source, target, frequency, lemmas in rows:
            entries.setdefault(source, []).append(Alignment(target, frequency, tuple(lemmas)))
        return cls({source: _ordered(alignments) for source, alignments in entries.items()})

    @classmethod
    def load(cls, path: Path) -> AlignmentTable:
        rows = []
        with open_text(path) as f:
            for number, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                fields = line.split("\t")
                if len(fields) != 4 or not fields[3].strip():
                    raise DataError(
                        f"{path}:{number}: expected `source<TAB>target<TAB>frequency<TAB>lemmas`"
                    )
                try:
                    frequency = int(fields[2])
                except ValueError:
                    raise DataError(f"{path}:{number}: frequency must be an integer") from None
                if frequency < 1:
                    raise DataError(f"{path}:{number}: frequency must be positive")
                lemmas = fields[3].split()
                if not set(lemmas) <= set(fields[1].split()):
                    raise DataError(f"{path}:{number}: lemmas must be words of `{fields[1]}`")
                rows.append((fields[0], fields[1], frequency, lemmas))
        return cls.from_rows(rows)


def _ordered(alignments: Iterable[Alignment]) -> tuple[Alignment, ...]:
    return tuple(sorted(alignments, key=lambda a: (-a.frequency, a.target_key)))


def can_align(
    src: HasOpenClassLemmas, tgt: HasOpenClassLemmas, dictionary: BilingualDictionary
) -> bool:
    """Return whether the open-class words of `src` translate one-to-one onto those of `tgt`."""
    source, target = src.open_class_lemmas, tgt.open_class_lemmas
    if len(source) != len(target):
        return False
    translations = [dictionary.translate(lemma) for lemma in source]
    if not all(translations):
        return False
    # Phrases hold at most three open-class words, so at most six pairings.
    return any(
        all(lemma in options for lemma, options in zip(permutation, translations, strict=True))
        for permutation in itertools.permutations(target)
    )


def alignment_frequency(src_count: int, tgt_count: int) -> int:
    """The joint support of an aligned pair: the rarer side's occurrences."""
    return min(src_count, tgt_count)


def align_corpora(
    src_phrases: Mapping[PhraseEntry, int],
    tgt_phrases: Mapping[PhraseEntry, int],
    dictionary: BilingualDictionary,
) -> AlignmentTable:
    """Align every source phrase with every compatible target phrase.

    Targets are indexed by (open-class count, lemma) so that a source phrase only visits
    targets containing a translation of each of its words.

    The table holds one row per (source key, target key). Two entries can share a key when
    the same words were tagged differently; such a pair keeps the larger frequency, not the
    sum.
    """
    index: dict[tuple[int, str], set[PhraseEntry]] = {}
    for entry in tgt_phrases:
        size = len(entry.open_class_lemmas)
        for lemma in entry.open_class_lemmas:
            index.setdefault((size, lemma), set()).add(entry)

    rows: list[tuple[str, str, int, tuple[str, ...]]] = []
    for source, src_count in src_phrases.items():
        size = len(source.open_class_lemmas)
        candidates: set[PhraseEntry] | None = None
        for lemma in source.open_class_lemmas:
            reachable = set().union(
                *(index.get((size, translation), ()) for translation in dictionary.translate(lemma))
            )
            candidates = reachable if candidates is None else candidates & reachable
            if not candidates:
                break
        for target in candidates or ():
            if can_align(source, target, dictionary):
                frequency = alignment_frequency(src_count, tgt_phrases[target])
                rows.append((source.key, target.key, frequency, target.open_class_lemmas))

    table = _merge(rows)
    logger.info("Aligned %d source phrases (%d pairs)", len(table.entries), len(table))
    return table


def _merge(rows: Iterable[tuple[str, str, int, tuple[str, ...]]]) -> AlignmentTable:
    best: dict[tuple[str, str], tuple[int, tuple[str, ...]]] = {}
    for source, target, frequency, lemmas in rows:
        best[source, target] = max((frequency, lemmas), best.get((source, target), (0, ())))
    return AlignmentTable.from_rows((s, t, f, lemmas) for (s, t), (f, lemmas) in best.items())
