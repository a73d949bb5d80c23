"""Noun-phrase candidates from tagged sentences.

A candidate is a maximal span matching

    (noun | adjective) (noun | adjective | preposition | determiner | conjunction)*
    (noun | adjective)

that holds two or three open-class words. Longer spans are dropped whole.
"""

from __future__ import annotations

import logging
import typing
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import nltk

from phrasesense.corpus import Document, PosTag, Sentence, Token
from phrasesense.errors import DataError, InvariantError, open_text

logger = logging.getLogger(__name__)

MIN_OPEN_CLASS = 2
MAX_OPEN_CLASS = 3

EDGE_TAGS = frozenset({PosTag.NOUN, PosTag.ADJECTIVE})
INTERIOR_TAGS = EDGE_TAGS | {PosTag.PREPOSITION, PosTag.DETERMINER, PosTag.CONJUNCTION}

_GRAMMAR = (
    "NP: {<noun|adjective>"
    "<noun|adjective|preposition|determiner|conjunction>*"
    "<noun|adjective>}"
)

_parser = nltk.RegexpParser(_GRAMMAR)


class PhraseEntry(typing.NamedTuple):
    """A phrase reduced to what alignment needs: its key and its open-class lemmas."""

    key: str
    open_class_lemmas: tuple[str, ...]


@dataclass(frozen=True)
class Phrase:
    """A candidate noun phrase, with the tokens it was read from."""

    tokens: tuple[Token, ...]
    start: int = 0
    """Offset of the first token in its sentence."""

    def __post_init__(self) -> None:
        validate_phrase(self.tokens)

    @property
    def open_class_lemmas(self) -> tuple[str, ...]:
        return tuple(token.lemma for token in self.tokens if token.pos.is_open_class)

    @property
    def key(self) -> str:
        return " ".join(token.lemma for token in self.tokens)

    @property
    def end(self) -> int:
        return self.start + len(self.tokens)

    def entry(self) -> PhraseEntry:
        return PhraseEntry(self.key, self.open_class_lemmas)


def validate_phrase(tokens: tuple[Token, ...]) -> None:
    """Raise `InvariantError` unless `tokens` spell a legal candidate phrase."""
    if len(tokens) < 2:
        raise InvariantError("a phrase needs at least two tokens")
    if tokens[0].pos not in EDGE_TAGS or tokens[-1].pos not in EDGE_TAGS:
        raise InvariantError("a phrase must start and end with a noun or adjective")
    for token in tokens[1:-1]:
        if token.pos not in INTERIOR_TAGS:
            raise InvariantError(f"`{token.surface}` ({token.pos.value}) cannot occur in a phrase")
    open_class = sum(1 for token in tokens if token.pos.is_open_class)
    if not MIN_OPEN_CLASS <= open_class <= MAX_OPEN_CLASS:
        raise InvariantError(f"a phrase holds two or three open-class words, not {open_class}")


def extract_noun_phrases(sentence: Sentence) -> list[Phrase]:
    """Return the candidate phrases of a tagged sentence, left to right."""
    if not sentence.tokens:
        return []

    tree = _parser.parse([(index, token.pos.value) for index, token in enumerate(sentence.tokens)])

    phrases = []
    for child in tree:
        if not isinstance(child, nltk.Tree):
            continue
        indices = [index for index, _tag in child.leaves()]
        tokens = sentence.tokens[indices[0] : indices[-1] + 1]
        open_class = sum(1 for token in tokens if token.pos.is_open_class)
        if MIN_OPEN_CLASS <= open_class <= MAX_OPEN_CLASS:
            phrases.append(Phrase(tokens, start=indices[0]))
        else:
            logger.debug(
                "Dropping span with %d open-class words: %s",
                open_class,
                " ".join(token.surface for token in tokens),
            )
    return phrases


class PhraseCount(typing.NamedTuple):
    doc_id: str
    entry: PhraseEntry
    occurrences: int


def count_phrases(documents: Iterable[Document]) -> list[PhraseCount]:
    """Count phrase occurrences per document, sorted by document id and phrase key."""
    counts: Counter[tuple[str, PhraseEntry]] = Counter()
    for document in documents:
        for sentence in document.sentences:
            for phrase in extract_noun_phrases(sentence):
                counts[document.doc_id, phrase.entry()] += 1
    return [
        PhraseCount(doc_id, entry, occurrences)
        for (doc_id, entry), occurrences in sorted(
            counts.items(), key=lambda item: (item[0][0], item[0][1])
        )
    ]


def phrase_totals(counts: Iterable[PhraseCount]) -> dict[PhraseEntry, int]:
    """Occurrences per phrase over all documents."""
    totals: Counter[PhraseEntry] = Counter()
    for count in counts:
        totals[count.entry] += count.occurrences
    return dict(totals)


def write_phrase_counts(counts: Iterable[PhraseCount], stream: TextIO) -> None:
    """Write `doc_id, key, open-class count, occurrences, open-class lemmas` rows."""
    for count in counts:
        stream.write(
            f"{count.doc_id}\t{count.entry.key}\t{len(count.entry.open_class_lemmas)}"
            f"\t{count.occurrences}\t{' '.join(count.entry.open_class_lemmas)}\n"
        )


def read_phrase_counts(path: Path) -> dict[PhraseEntry, int]:
    """Read a phrase file, summing occurrences over documents."""
    totals: Counter[PhraseEntry] = Counter()
    with open_text(path) as f:
        for number, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise DataError(f"{path}:{number}: expected five tab-separated columns")
            _doc_id, key, open_count, occurrences, lemmas = fields
            open_class_lemmas = tuple(lemmas.split())
            try:
                declared, count = int(open_count), int(occurrences)
            except ValueError:
                raise DataError(f"{path}:{number}: counts must be integers") from None
            if declared != len(open_class_lemmas) or count < 1:
                raise DataError(f"{path}:{number}: inconsistent counts for `{key}`")
            totals[PhraseEntry(key, open_class_lemmas)] += count
    return dict(totals)
