"""Phrase detection in running text with a forest of lemma tries.

Each tree holds the phrases that start with its root lemma. Scanning reads lemmas from the
current position down the matching tree, remembers the deepest acceptance node it passed,
emits that phrase and resumes right after it. Tokens read past the last acceptance node go
back to the input. Without an acceptance node the scan resumes one token later.
"""

from __future__ import annotations

import typing
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from phrasesense.corpus import Token
from phrasesense.errors import MalformedPhraseError


@dataclass
class Node:
    label: str
    children: dict[str, Node] = field(default_factory=dict)
    phrase_key: str | None = None
    """Set on acceptance nodes: the phrase that ends here."""

    @property
    def accepting(self) -> bool:
        return self.phrase_key is not None


class Match(typing.NamedTuple):
    start: int
    end: int
    """Exclusive."""
    phrase_key: str


class PhraseForest:
    """Tries keyed by the first lemma of each stored phrase."""

    def __init__(self) -> None:
        self.roots: dict[str, Node] = {}
        self._size = 0
        self._depth = 0

    def add(self, phrase_key: str) -> None:
        lemmas = phrase_key.split()
        if len(lemmas) < 2:
            raise MalformedPhraseError(f"a phrase needs at least two lemmas: `{phrase_key}`")
        key = " ".join(lemmas)
        node = self.roots.setdefault(lemmas[0], Node(lemmas[0]))
        for lemma in lemmas[1:]:
            node = node.children.setdefault(lemma, Node(lemma))
        if node.phrase_key is None:
            node.phrase_key = key
            self._size += 1
            self._depth = max(self._depth, len(lemmas))

    def __len__(self) -> int:
        return self._size

    def __contains__(self, phrase_key: str) -> bool:
        lemmas = phrase_key.split()
        node = self.roots.get(lemmas[0]) if lemmas else None
        for lemma in lemmas[1:]:
            if node is None:
                return False
            node = node.children.get(lemma)
        return node is not None and node.accepting

    @property
    def max_depth(self) -> int:
        """Length in lemmas of the longest stored phrase."""
        return self._depth

    def phrases(self) -> list[str]:
        found: list[str] = []
        stack = list(self.roots.values())
        while stack:
            node = stack.pop()
            if node.phrase_key is not None:
                found.append(node.phrase_key)
            stack.extend(node.children.values())
        return sorted(found)


def build_forest(phrases: Iterable[str]) -> PhraseForest:
    forest = PhraseForest()
    for phrase_key in phrases:
        forest.add(phrase_key)
    return forest


def match_lemmas(lemmas: Sequence[str], forest: PhraseForest) -> list[Match]:
    """Find non-overlapping phrase occurrences, longest first, scanning left to right."""
    matches = []
    position = 0
    count = len(lemmas)
    while position < count:
        node = forest.roots.get(lemmas[position])
        best: tuple[int, str] | None = None
        cursor = position
        while node is not None:
            cursor += 1
            if node.phrase_key is not None:
                best = (cursor, node.phrase_key)
            if cursor >= count:
                break
            node = node.children.get(lemmas[cursor])
        if best is None:
            position += 1
        else:
            end, phrase_key = best
            matches.append(Match(position, end, phrase_key))
            position = end
    return matches


def match_text(tokens: Sequence[Token], forest: PhraseForest) -> list[Match]:
    """Match by lemma, so inflected forms find their stored phrase."""
    return match_lemmas([token.lemma for token in tokens], forest)
