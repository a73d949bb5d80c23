"""Coverage and potential precision of phrase-based sense filtering.

Only amenable words are scored. A word is covered at a threshold when its alignments
attribute holds an entry at or above it, and retained when one of those entries names a
gold sense.
"""

from __future__ import annotations

import copy
import json
import logging
import typing
from collections.abc import Iterable, Sequence
from typing import TextIO

from phrasesense.annotator import (
    ALIGNMENTS_ATTRIBUTE,
    WORD,
    AnnotatedWord,
    Corpus,
    format_evidence,
    parse_evidence,
)
from phrasesense.errors import EvaluationError, InvariantError

logger = logging.getLogger(__name__)


def format_percent(rate: float | None) -> str:
    return "n/a" if rate is None else f"{rate * 100:.2f}%"


def _ratio(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else 0.0


class EvalReport(typing.NamedTuple):
    threshold: int
    amenable_words: int
    phrase_words: int
    covered_words: int
    retained_words: int

    @property
    def phrase_rate(self) -> float:
        return _ratio(self.phrase_words, self.amenable_words)

    @property
    def coverage(self) -> float:
        return _ratio(self.covered_words, self.amenable_words)

    @property
    def potential_precision(self) -> float | None:
        """`None` when nothing is covered."""
        if not self.covered_words:
            return None
        return self.retained_words / self.covered_words

    def validate(self) -> None:
        if self.threshold < 0:
            raise InvariantError(f"threshold must be non-negative, not {self.threshold}")
        counts = (
            0,
            self.retained_words,
            self.covered_words,
            self.phrase_words,
            self.amenable_words,
        )
        if list(counts) != sorted(counts):
            raise InvariantError(f"inconsistent counts: {self}")

    def to_dict(self) -> dict[str, int | float | None]:
        precision = self.potential_precision
        return {
            "threshold": self.threshold,
            "amenable_words": self.amenable_words,
            "phrase_words": self.phrase_words,
            "covered_words": self.covered_words,
            "retained_words": self.retained_words,
            "phrase_rate": round(self.phrase_rate * 100, 2),
            "coverage": round(self.coverage * 100, 2),
            "potential_precision": None if precision is None else round(precision * 100, 2),
        }


class SweepRow(typing.NamedTuple):
    threshold: int
    amenable_words: int
    covered_words: int
    retained_words: int

    @property
    def coverage(self) -> float:
        return _ratio(self.covered_words, self.amenable_words)

    @property
    def potential_precision(self) -> float | None:
        if not self.covered_words:
            return None
        return self.retained_words / self.covered_words


class WordScore(typing.NamedTuple):
    """What a single amenable word contributes at any threshold."""

    in_phrase: bool
    covered_up_to: int | None
    """Highest alignment frequency in its evidence, if any."""
    retained_up_to: int | None
    """Highest frequency of an entry naming a gold sense, if any."""

    def covered(self, threshold: int) -> bool:
        return self.covered_up_to is not None and self.covered_up_to >= threshold

    def retained(self, threshold: int) -> bool:
        return self.retained_up_to is not None and self.retained_up_to >= threshold


def score_word(word: AnnotatedWord) -> WordScore:
    evidence = word.alignments or ()
    gold = word.gold_sense
    gold_senses = set(gold.senses) if gold is not None else set()
    covered = max((entry.frequency for entry in evidence), default=None)
    retained = max(
        (entry.frequency for entry in evidence if entry.sense in gold_senses), default=None
    )
    return WordScore(word.phrase is not None, covered, retained)


def _scores(corpus: Corpus) -> list[WordScore]:
    words = list(corpus.words())
    if words and all(word.gold_sense is None for word in words):
        raise EvaluationError("the corpus carries no gold senses (`wnsn`); nothing to score")
    return [score_word(word) for word in words if word.amenable]


def _check_threshold(threshold: int) -> None:
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, not {threshold}")


def evaluate(corpus: Corpus, threshold: int) -> EvalReport:
    _check_threshold(threshold)
    scores = _scores(corpus)
    report = EvalReport(
        threshold,
        len(scores),
        sum(1 for score in scores if score.in_phrase),
        sum(1 for score in scores if score.covered(threshold)),
        sum(1 for score in scores if score.retained(threshold)),
    )
    report.validate()
    return report


def default_thresholds(corpus: Corpus) -> list[int]:
    """Zero and every alignment frequency found in the corpus, ascending."""
    frequencies = {0}
    for word in corpus.words():
        frequencies.update(entry.frequency for entry in word.alignments or ())
    return sorted(frequencies)


def sweep(corpus: Corpus, thresholds: Sequence[int] | None = None) -> list[SweepRow]:
    """Score the corpus once and report every threshold from the same word scores."""
    if thresholds is None:
        thresholds = default_thresholds(corpus)
    thresholds = list(thresholds)
    for threshold in thresholds:
        _check_threshold(threshold)
    if thresholds != sorted(thresholds):
        raise ValueError(f"thresholds must be ascending: {thresholds}")

    scores = _scores(corpus)
    rows = [
        SweepRow(
            threshold,
            len(scores),
            sum(1 for score in scores if score.covered(threshold)),
            sum(1 for score in scores if score.retained(threshold)),
        )
        for threshold in thresholds
    ]
    logger.info("Swept %d thresholds over %d amenable words", len(rows), len(scores))
    return rows


def prefilter(corpus: Corpus, threshold: int) -> Corpus:
    """Drop alignment entries below `threshold`; words left with none lose the attribute."""
    _check_threshold(threshold)
    root = copy.deepcopy(corpus.root)
    for element in root.iter(WORD):
        text = element.get(ALIGNMENTS_ATTRIBUTE)
        if text is None:
            continue
        kept = [entry for entry in parse_evidence(text) if entry.frequency >= threshold]
        if kept:
            element.set(ALIGNMENTS_ATTRIBUTE, format_evidence(kept))
        else:
            del element.attrib[ALIGNMENTS_ATTRIBUTE]
    return Corpus.from_root(root)


def render_text(report: EvalReport) -> str:
    return (
        f"Threshold: {report.threshold}\n"
        f"Amenable words: {report.amenable_words}\n"
        f"Phrase words: {report.phrase_words} ({format_percent(report.phrase_rate)})\n"
        f"Covered words: {report.covered_words} ({format_percent(report.coverage)})\n"
        f"Retained words: {report.retained_words}\n"
        f"Potential precision: {format_percent(report.potential_precision)}\n"
    )


def render_json(report: EvalReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def render_tsv(report: EvalReport) -> str:
    return "".join(
        f"{key}\t{'' if value is None else value}\n" for key, value in report.to_dict().items()
    )


SWEEP_HEADER = ("threshold", "coverage", "covered_words", "potential_precision", "retained_words")


def write_sweep(rows: Iterable[SweepRow], stream: TextIO) -> None:
    """Write the sweep as TSV; rates are percentages, absent precision is `-`."""
    stream.write("\t".join(SWEEP_HEADER) + "\n")
    for row in rows:
        precision = row.potential_precision
        stream.write(
            f"{row.threshold}\t{row.coverage * 100:.2f}\t{row.covered_words}"
            f"\t{'-' if precision is None else f'{precision * 100:.2f}'}"
            f"\t{row.retained_words}\n"
        )
