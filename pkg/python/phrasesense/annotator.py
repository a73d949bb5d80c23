"""Sense-tagged XML corpora: parsing, phrase enrichment and serialization.

The corpus is a tree of `wf` (word form) and `punc` elements grouped in sentence
containers, optionally inside `context` documents. Enrichment adds two attributes to
words inside detected phrases:

- `phrase`: the key of the detected phrase.
- `alignments`: space-separated `sense:frequency` pairs, one per aligned phrase and
  supported sense, where `sense` is a sense number of the word. An aligned phrase that
  supports no sense is written `-:frequency`.
"""

from __future__ import annotations

import copy
import logging
import typing
import xml.etree.ElementTree as ET
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import BinaryIO

from phrasesense.aligner import AlignmentTable
from phrasesense.corpus import Lexicon, PosTag, Token, analyze, pos_from_penn
from phrasesense.errors import CorpusParseError
from phrasesense.matcher import PhraseForest, match_text
from phrasesense.sense_filter import FilterResult, SenseFilter

logger = logging.getLogger(__name__)

WORD = "wf"
PUNCTUATION = "punc"
DOCUMENT = "context"

PHRASE_ATTRIBUTE = "phrase"
ALIGNMENTS_ATTRIBUTE = "alignments"


class GoldSense(typing.NamedTuple):
    senses: tuple[int, ...]
    """Sense numbers; more than one when annotators could not decide."""
    lexsn: str | None

    @property
    def wnsn(self) -> int:
        return self.senses[0]


class SenseEvidence(typing.NamedTuple):
    sense: int | None
    """`None` for an aligned phrase that supports no sense."""
    frequency: int


def format_evidence(evidence: typing.Iterable[SenseEvidence]) -> str:
    return " ".join(
        f"{'-' if item.sense is None else item.sense}:{item.frequency}" for item in evidence
    )


def parse_evidence(text: str) -> tuple[SenseEvidence, ...]:
    evidence = []
    for pair in text.split():
        sense, _, frequency = pair.rpartition(":")
        if not sense or not frequency.isdigit():
            raise ValueError(f"malformed alignment entry `{pair}`")
        evidence.append(SenseEvidence(None if sense == "-" else int(sense), int(frequency)))
    return tuple(evidence)


def _parse_gold(wnsn: str | None, lexsn: str | None) -> GoldSense | None:
    if not wnsn:
        return None
    try:
        senses = tuple(int(value) for value in wnsn.split(";"))
    except ValueError:
        return None
    if not senses or min(senses) < 1:
        return None
    return GoldSense(senses, lexsn)


@dataclass(frozen=True)
class AnnotatedWord:
    """A `wf` element: its text and its attributes in alphabetical order."""

    surface: str
    attributes: tuple[tuple[str, str], ...] = ()

    def get(self, name: str) -> str | None:
        for key, value in self.attributes:
            if key == name:
                return value
        return None

    @property
    def cmd(self) -> str | None:
        return self.get("cmd")

    @property
    def pos(self) -> str | None:
        return self.get("pos")

    @property
    def lemma(self) -> str | None:
        return self.get("lemma")

    @property
    def gold_sense(self) -> GoldSense | None:
        return _parse_gold(self.get("wnsn"), self.get("lexsn"))

    @property
    def phrase(self) -> str | None:
        return self.get(PHRASE_ATTRIBUTE)

    @property
    def alignments(self) -> tuple[SenseEvidence, ...] | None:
        text = self.get(ALIGNMENTS_ATTRIBUTE)
        return None if text is None else parse_evidence(text)

    @property
    def ignored(self) -> bool:
        return self.cmd == "ignore"

    @property
    def amenable(self) -> bool:
        """A sense-annotated noun that the filter could be scored on."""
        return (
            self.cmd == "done"
            and (self.pos or "").startswith("NN")
            and bool(self.lemma)
            and self.gold_sense is not None
        )

    def validate(self) -> None:
        text = self.get(ALIGNMENTS_ATTRIBUTE)
        if text is None:
            return
        if self.phrase is None:
            raise ValueError(f"`{self.surface}` has alignments but no phrase")
        parse_evidence(text)

    @classmethod
    def from_element(cls, element: ET.Element) -> AnnotatedWord:
        return cls(_surface(element), tuple(sorted(element.attrib.items())))


class CorpusSentence(typing.NamedTuple):
    doc_id: str
    words: tuple[AnnotatedWord, ...]


@dataclass(frozen=True)
class Corpus:
    """A parsed corpus; `root` keeps every element for serialization."""

    root: ET.Element = field(compare=False, repr=False)
    sentences: tuple[CorpusSentence, ...] = ()

    @classmethod
    def from_root(cls, root: ET.Element) -> Corpus:
        sentences = []
        for doc_id, elements in _containers(root):
            words = tuple(AnnotatedWord.from_element(e) for e in elements if e.tag == WORD)
            sentences.append(CorpusSentence(doc_id, words))
        return cls(root, tuple(sentences))

    def words(self) -> Iterator[AnnotatedWord]:
        for sentence in self.sentences:
            yield from sentence.words

    def documents(self) -> dict[str, list[CorpusSentence]]:
        grouped: dict[str, list[CorpusSentence]] = {}
        for sentence in self.sentences:
            grouped.setdefault(sentence.doc_id, []).append(sentence)
        return grouped


def _surface(element: ET.Element) -> str:
    return "".join(element.itertext()).strip()


def _containers(root: ET.Element) -> list[tuple[str, list[ET.Element]]]:
    """Sentence containers in document order, with the id of their enclosing document."""
    found: list[tuple[str, list[ET.Element]]] = []
    documents = 0

    def walk(element: ET.Element, doc_id: str) -> None:
        nonlocal documents
        if element.tag == DOCUMENT:
            documents += 1
            doc_id = element.get("filename") or element.get("id") or f"{DOCUMENT}-{documents}"
        tokens = [child for child in element if child.tag in (WORD, PUNCTUATION)]
        if tokens:
            found.append((doc_id, tokens))
        for child in element:
            if child.tag not in (WORD, PUNCTUATION):
                walk(child, doc_id)

    walk(root, root.get("filename") or root.get("id") or root.tag)
    return found


def parse_corpus(xml: bytes | BinaryIO) -> Corpus:
    """Parse a sense-tagged corpus from bytes or a binary stream."""
    try:
        if isinstance(xml, bytes):
            root = ET.fromstring(xml)
        else:
            root = ET.parse(xml).getroot()
    except ET.ParseError as err:
        line, column = err.position
        raise CorpusParseError(str(err).split(":")[0], line, column) from None

    corpus = Corpus.from_root(root)
    for word in corpus.words():
        if not word.ignored and not word.lemma:
            logger.warning("Word `%s` has no lemma; it is not amenable", word.surface)
        try:
            word.validate()
        except ValueError as err:
            raise CorpusParseError(str(err)) from None
    return corpus


def serialize_corpus(corpus: Corpus) -> bytes:
    """UTF-8 XML with every element's attributes in alphabetical order."""
    root = copy.deepcopy(corpus.root)
    for element in root.iter():
        if len(element.attrib) > 1:
            ordered = sorted(element.attrib.items())
            element.attrib.clear()
            element.attrib.update(ordered)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True) + b"\n"


def _stream_token(element: ET.Element, lexicon: Lexicon) -> Token:
    surface = _surface(element) or "_"
    if element.tag == PUNCTUATION:
        return Token(surface, surface.lower(), PosTag.OTHER)
    analyzed = analyze(surface, lexicon)
    lemma = (element.get("lemma") or "").lower() or analyzed.lemma
    tag = element.get("pos")
    pos = pos_from_penn(tag) if tag else analyzed.pos
    return Token(surface, lemma, pos)


def _evidence(result: FilterResult, sense_filter: SenseFilter) -> list[SenseEvidence]:
    inventory = sense_filter.src_inventory
    evidence = []
    for support in result.support:
        if not support.synsets:
            evidence.append(SenseEvidence(None, support.frequency))
        for synset in support.synsets:
            sense = inventory.sense_number(result.target, synset)
            evidence.append(SenseEvidence(sense, support.frequency))
    return evidence


def _check_gold_key(element: ET.Element, lemma: str, sense_filter: SenseFilter) -> None:
    word = AnnotatedWord.from_element(element)
    gold = word.gold_sense
    if gold is None or gold.lexsn is None:
        return
    senses = sense_filter.src_inventory.senses_of(lemma)
    if gold.wnsn > len(senses):
        logger.warning("`%s` has gold sense %d but only %d senses", lemma, gold.wnsn, len(senses))
        return
    key = sense_filter.src_inventory.sense_key(senses[gold.wnsn - 1], lemma)
    if key is not None and key.partition("%")[2] != gold.lexsn:
        logger.warning(
            "`%s` sense %d is `%s` in the inventory but `%s` in the corpus",
            lemma,
            gold.wnsn,
            key,
            gold.lexsn,
        )


def annotate(
    corpus: Corpus,
    forest: PhraseForest,
    table: AlignmentTable,
    sense_filter: SenseFilter,
    lexicon: Lexicon | None = None,
) -> Corpus:
    """Return a copy of `corpus` with phrase and alignment attributes on matched words.

    Attributes from an earlier enrichment are replaced; all other attributes are kept.
    """
    lexicon = lexicon or Lexicon()
    root = copy.deepcopy(corpus.root)
    matched = 0
    for _doc_id, elements in _containers(root):
        for element in elements:
            element.attrib.pop(PHRASE_ATTRIBUTE, None)
            element.attrib.pop(ALIGNMENTS_ATTRIBUTE, None)
        tokens = [_stream_token(element, lexicon) for element in elements]
        for match in match_text(tokens, forest):
            matched += 1
            for offset in range(match.start, match.end):
                element, token = elements[offset], tokens[offset]
                if element.tag != WORD:
                    continue
                element.set(PHRASE_ATTRIBUTE, match.phrase_key)
                if not token.pos.is_open_class:
                    continue
                result = sense_filter(token.lemma, match.phrase_key, table)
                if result.covered:
                    evidence = _evidence(result, sense_filter)
                    element.set(ALIGNMENTS_ATTRIBUTE, format_evidence(evidence))
                    _check_gold_key(element, token.lemma, sense_filter)
    logger.info("Detected %d phrase occurrences", matched)
    return Corpus.from_root(root)
