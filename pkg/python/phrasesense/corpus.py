"""Tokens, lexicons and plain-text corpora shared by every other module."""

from __future__ import annotations

import enum
import logging
import typing
import unicodedata
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

from phrasesense.errors import DataError, InvariantError, open_text

logger = logging.getLogger(__name__)


class PosTag(enum.Enum):
    """Coarse part-of-speech categories used by the phrase pattern."""

    NOUN = "noun"
    ADJECTIVE = "adjective"
    PREPOSITION = "preposition"
    DETERMINER = "determiner"
    CONJUNCTION = "conjunction"
    VERB = "verb"
    OTHER = "other"

    @property
    def is_open_class(self) -> bool:
        return self in _OPEN_CLASS


_OPEN_CLASS = frozenset({PosTag.NOUN, PosTag.ADJECTIVE, PosTag.VERB})


def is_open_class(pos: PosTag) -> bool:
    """Return whether `pos` is a content-bearing category (noun, adjective or verb)."""
    return pos in _OPEN_CLASS


class Token(typing.NamedTuple):
    """A word of running text after lexicon analysis."""

    surface: str
    """The form as it appears in the input."""

    lemma: str
    """The lowercased canonical form."""

    pos: PosTag
    """The most likely part of speech for the surface form."""

    def validate(self) -> None:
        if not self.surface:
            raise InvariantError("token surface is empty")
        if not self.lemma or self.lemma != self.lemma.lower():
            raise InvariantError(f"token lemma must be non-empty and lowercase: {self.lemma!r}")


class Sentence(typing.NamedTuple):
    tokens: tuple[Token, ...]

    @property
    def lemmas(self) -> list[str]:
        return [token.lemma for token in self.tokens]


class Document(typing.NamedTuple):
    doc_id: str
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class Lexicon:
    """One analysis (lemma and tag) per surface form."""

    entries: Mapping[str, tuple[str, PosTag]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for surface, (lemma, pos) in self.entries.items():
            if not surface:
                raise InvariantError("lexicon surface forms must be non-empty")
            if not lemma or lemma != lemma.lower():
                raise InvariantError(f"lexicon lemmas must be lowercase: {lemma!r}")
            if not isinstance(pos, PosTag):
                raise InvariantError(f"`{surface}` has no part of speech: {pos!r}")

    def lookup(self, surface: str) -> tuple[str, PosTag] | None:
        entry = self.entries.get(surface)
        if entry is None:
            entry = self.entries.get(surface.lower())
        return entry

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def load(cls, path: Path) -> Lexicon:
        """Read a `surface<TAB>lemma<TAB>pos` file; later duplicates replace earlier ones."""
        entries: dict[str, tuple[str, PosTag]] = {}
        with open_text(path) as f:
            for number, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 3 or not fields[0] or not fields[1]:
                    raise DataError(f"{path}:{number}: expected `surface<TAB>lemma<TAB>pos`")
                surface, lemma, tag = fields
                try:
                    pos = PosTag(tag.strip())
                except ValueError:
                    raise DataError(f"{path}:{number}: unknown part of speech `{tag}`") from None
                if surface in entries:
                    logger.warning(
                        "%s:%d: duplicate lexicon entry for `%s`, keeping the last one",
                        path,
                        number,
                        surface,
                    )
                entries[surface] = (lemma.lower(), pos)
        logger.info("Loaded %d lexicon entries from %s", len(entries), path)
        return cls(entries)


def _is_punctuation(char: str) -> bool:
    return unicodedata.category(char).startswith("P")


def tokenize(raw_text: str) -> list[str]:
    """Split on whitespace, then peel leading and trailing punctuation into single units."""
    units: list[str] = []
    for chunk in raw_text.split():
        start, end = 0, len(chunk)
        while start < end and _is_punctuation(chunk[start]):
            start += 1
        # A chunk made only of punctuation is fully peeled from the front.
        leading = list(chunk[:start])
        while end > start and _is_punctuation(chunk[end - 1]):
            end -= 1
        units.extend(leading)
        if start < end:
            units.append(chunk[start:end])
        units.extend(chunk[end:])
    return units


def analyze(surface: str, lexicon: Lexicon) -> Token:
    """Attach the lexicon analysis, or the identity fallback with `PosTag.OTHER`."""
    entry = lexicon.lookup(surface)
    if entry is None:
        return Token(surface, surface.lower(), PosTag.OTHER)
    lemma, pos = entry
    return Token(surface, lemma, pos)


def analyze_sentence(raw_text: str, lexicon: Lexicon) -> Sentence:
    return Sentence(tuple(analyze(unit, lexicon) for unit in tokenize(raw_text)))


_PENN_PREFIXES = (
    ("NN", PosTag.NOUN),
    ("JJ", PosTag.ADJECTIVE),
    ("VB", PosTag.VERB),
    ("IN", PosTag.PREPOSITION),
    ("TO", PosTag.PREPOSITION),
    ("DT", PosTag.DETERMINER),
    ("PDT", PosTag.DETERMINER),
    ("CC", PosTag.CONJUNCTION),
)


def pos_from_penn(tag: str) -> PosTag:
    """Map a Penn-style tag (as found in sense-tagged corpora) onto a `PosTag`."""
    for prefix, pos in _PENN_PREFIXES:
        if tag.startswith(prefix):
            return pos
    return PosTag.OTHER


def read_documents(path: Path, lexicon: Lexicon) -> list[Document]:
    """Read one sentence per line.

    A line may start with `doc_id<TAB>`; lines without it belong to a document named after
    the file stem. Documents keep the order in which their ids first appear.
    """
    sentences: dict[str, list[Sentence]] = {}
    with open_text(path) as f:
        for line in f:
            line = line.rstrip("\n")
            doc_id, tab, text = line.partition("\t")
            if not tab:
                doc_id, text = path.stem, line
            sentence = analyze_sentence(text, lexicon)
            if sentence.tokens:
                sentences.setdefault(doc_id, []).append(sentence)
    return [Document(doc_id, tuple(items)) for doc_id, items in sentences.items()]
