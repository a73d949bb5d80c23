"""Sense filtering through aligned phrases.

For a word inside a detected phrase, every aligned target-language phrase is examined: the
synsets of its open-class words are carried into the source inventory through a chain of synset
mappings (an interlingual index followed by release-to-release mappings), and each source
synset that holds the word keeps the corresponding sense.
"""

from __future__ import annotations

import logging
import typing
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

from phrasesense.aligner import AlignmentTable
from phrasesense.errors import DataError, InvariantError, open_text

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SenseInventory:
    """Synsets of one language and the ordered senses of each lemma."""

    language: str
    synsets: Mapping[str, frozenset[str]]
    senses: Mapping[str, tuple[str, ...]]
    sense_keys: Mapping[tuple[str, str], str] = field(default_factory=dict)
    """Lexicographer sense key per (synset, lemma), when known."""

    def __post_init__(self) -> None:
        for lemma, synsets in self.senses.items():
            if len(set(synsets)) != len(synsets):
                raise InvariantError(f"duplicate senses for `{lemma}`")
            for synset in synsets:
                if lemma not in self.synsets.get(synset, ()):
                    raise InvariantError(f"`{lemma}` lists `{synset}` without being a member")
        for synset, lemmas in self.synsets.items():
            for lemma in lemmas:
                if synset not in self.senses.get(lemma, ()):
                    raise InvariantError(f"`{synset}` holds `{lemma}` but is not among its senses")

    def senses_of(self, lemma: str) -> tuple[str, ...]:
        return self.senses.get(lemma, ())

    def sense_number(self, lemma: str, synset: str) -> int:
        """The 1-based position of `synset` among the senses of `lemma`."""
        return self.senses_of(lemma).index(synset) + 1

    def sense_key(self, synset: str, lemma: str) -> str | None:
        return self.sense_keys.get((synset, lemma))

    @classmethod
    def from_synsets(
        cls,
        language: str,
        rows: Iterable[tuple[str, Iterable[str]]],
        order: Mapping[str, Iterable[str]] | None = None,
        sense_keys: Mapping[tuple[str, str], str] | None = None,
    ) -> SenseInventory:
        """Build an inventory where sense order is encounter order unless `order` says otherwise."""
        synsets: dict[str, list[str]] = {}
        senses: dict[str, list[str]] = {}
        for synset, lemmas in rows:
            members = synsets.setdefault(synset, [])
            for lemma in lemmas:
                lemma = lemma.lower()
                if lemma in members:
                    continue
                members.append(lemma)
                senses.setdefault(lemma, []).append(synset)

        for lemma, ordered in (order or {}).items():
            ordered = list(ordered)
            known = senses.get(lemma, [])
            missing = [synset for synset in ordered if synset not in known]
            if missing:
                raise DataError(f"sense index lists `{lemma}` in synsets without it: {missing}")
            senses[lemma] = ordered + [synset for synset in known if synset not in ordered]

        return cls(
            language,
            {synset: frozenset(lemmas) for synset, lemmas in synsets.items()},
            {lemma: tuple(items) for lemma, items in senses.items()},
            dict(sense_keys or {}),
        )

    @classmethod
    def load(
        cls, path: Path, index: Path | None = None, language: str | None = None
    ) -> SenseInventory:
        """Read `synset<TAB>lemma,lemma,...` lines and an optional sense index.

        Index lines are `lemma<TAB>synset<TAB>sense_number[<TAB>sense_key]`.
        """
        rows: list[tuple[str, list[str]]] = []
        seen: set[str] = set()
        with open_text(path) as f:
            for number, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 2 or not fields[0]:
                    raise DataError(f"{path}:{number}: expected `synset<TAB>lemma,lemma,...`")
                synset, members = fields
                lemmas = [lemma.strip() for lemma in members.split(",") if lemma.strip()]
                if not lemmas:
                    raise DataError(f"{path}:{number}: synset `{synset}` has no lemmas")
                if synset in seen:
                    logger.warning("%s:%d: synset `%s` listed again, merging", path, number, synset)
                seen.add(synset)
                rows.append((synset, lemmas))

        order: dict[str, list[str]] = {}
        sense_keys: dict[tuple[str, str], str] = {}
        if index is not None:
            numbered: dict[str, list[tuple[int, str]]] = {}
            with open_text(index) as f:
                for number, line in enumerate(f, start=1):
                    line = line.rstrip("\n")
                    if not line.strip() or line.startswith("#"):
                        continue
                    fields = line.split("\t")
                    if len(fields) not in (3, 4):
                        raise DataError(
                            f"{index}:{number}: expected `lemma<TAB>synset<TAB>sense_number`"
                        )
                    try:
                        sense_number = int(fields[2])
                    except ValueError:
                        message = f"{index}:{number}: sense number must be an integer"
                        raise DataError(message) from None
                    lemma = fields[0].lower()
                    numbered.setdefault(lemma, []).append((sense_number, fields[1]))
                    if len(fields) == 4 and fields[3]:
                        sense_keys[fields[1], lemma] = fields[3]
            order = {lemma: [s for _, s in sorted(items)] for lemma, items in numbered.items()}

        inventory = cls.from_synsets(language or path.stem, rows, order, sense_keys)
        logger.info(
            "Loaded %d synsets for %d lemmas from %s",
            len(inventory.synsets),
            len(inventory.senses),
            path,
        )
        return inventory


@dataclass(frozen=True)
class SynsetMapping:
    """A partial map between synset ids; lookups may find nothing."""

    name: str
    pairs: Mapping[str, str] = field(default_factory=dict)

    def get(self, synset: str) -> str | None:
        return self.pairs.get(synset)

    def with_pair(self, source: str, target: str) -> SynsetMapping:
        """Extend the mapping; an existing pair cannot be redirected."""
        if self.pairs.get(source, target) != target:
            raise InvariantError(f"`{source}` is already mapped to `{self.pairs[source]}`")
        return SynsetMapping(self.name, {**self.pairs, source: target})

    def inverse(self) -> SynsetMapping:
        inverse: dict[str, str] = {}
        for source, target in sorted(self.pairs.items()):
            if target in inverse:
                logger.warning(
                    "`%s` is the image of both `%s` and `%s`; keeping `%s`",
                    target,
                    inverse[target],
                    source,
                    inverse[target],
                )
                continue
            inverse[target] = source
        return SynsetMapping(f"{self.name}-inverse", inverse)

    def write(self, stream: TextIO) -> None:
        for source, target in sorted(self.pairs.items()):
            stream.write(f"{source}\t{target}\n")

    @classmethod
    def load(cls, path: Path) -> SynsetMapping:
        """Read `from_synset<TAB>to_synset` lines."""
        pairs: dict[str, str] = {}
        with open_text(path) as f:
            for number, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 2 or not all(fields):
                    raise DataError(f"{path}:{number}: expected `from_synset<TAB>to_synset`")
                if fields[0] in pairs and pairs[fields[0]] != fields[1]:
                    raise DataError(f"{path}:{number}: `{fields[0]}` is mapped twice")
                pairs[fields[0]] = fields[1]
        logger.info("Loaded %d mapping pairs from %s", len(pairs), path)
        return cls(path.stem, pairs)


@dataclass(frozen=True)
class MappingChain:
    """Mappings applied left to right; the empty chain is the identity."""

    mappings: tuple[SynsetMapping, ...] = ()

    def __iter__(self) -> Iterator[SynsetMapping]:
        return iter(self.mappings)

    def __len__(self) -> int:
        return len(self.mappings)

    @classmethod
    def load(cls, paths: Iterable[Path]) -> MappingChain:
        return cls(tuple(SynsetMapping.load(path) for path in paths))


def map_synset(s: str, chain: MappingChain) -> str | None:
    """Carry a synset through every link of `chain`, or `None` if any link has no image."""
    synset: str | None = s
    for mapping in chain:
        synset = mapping.get(synset)
        if synset is None:
            return None
    return synset


class AlignmentSupport(typing.NamedTuple):
    """The senses one aligned phrase supports."""

    target_key: str
    frequency: int
    synsets: tuple[str, ...]
    """In sense order; empty when the alignment supports nothing."""


class FilterResult(typing.NamedTuple):
    target: str
    admissible: Mapping[str, int]
    """Supporting frequency per kept synset."""
    covered: bool
    support: tuple[AlignmentSupport, ...] = ()


def filter_senses(
    target: str,
    phrase_key: str,
    table: AlignmentTable,
    tgt_inventory: SenseInventory,
    chain: MappingChain,
    src_inventory: SenseInventory,
    threshold: int,
) -> FilterResult:
    """Keep the senses of `target` that the open-class words of an aligned phrase support.

    Only alignments with frequency >= `threshold` count. An alignment supports a sense once,
    however many of its words lead there; its frequency is added to that sense.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, not {threshold}")

    senses = src_inventory.senses_of(target)
    position = {synset: number for number, synset in enumerate(senses)}
    admissible: dict[str, int] = {}
    support = []
    for alignment in table.alignments(phrase_key):
        if alignment.frequency < threshold:
            continue
        supported: set[str] = set()
        for word in dict.fromkeys(alignment.target_lemmas):
            for synset in tgt_inventory.senses_of(word):
                image = map_synset(synset, chain)
                if image is not None and image in position:
                    supported.add(image)
        for synset in supported:
            admissible[synset] = admissible.get(synset, 0) + alignment.frequency
        support.append(
            AlignmentSupport(
                alignment.target_key,
                alignment.frequency,
                tuple(sorted(supported, key=position.__getitem__)),
            )
        )

    ordered = {synset: admissible[synset] for synset in senses if synset in admissible}
    return FilterResult(target, ordered, covered=bool(support), support=tuple(support))


@dataclass(frozen=True)
class SenseFilter:
    """The fixed inputs of `filter_senses`, for filtering many words."""

    tgt_inventory: SenseInventory
    src_inventory: SenseInventory
    chain: MappingChain = MappingChain()
    threshold: int = 0

    def __call__(self, target: str, phrase_key: str, table: AlignmentTable) -> FilterResult:
        return filter_senses(
            target,
            phrase_key,
            table,
            self.tgt_inventory,
            self.chain,
            self.src_inventory,
            self.threshold,
        )
