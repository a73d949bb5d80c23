"""End-to-end runs: chunk both corpora, align, annotate, evaluate and sweep."""

from __future__ import annotations

import logging
import typing
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import TypeVar

from phrasesense.aligner import AlignmentTable, BilingualDictionary, align_corpora
from phrasesense.annotator import Corpus, annotate, parse_corpus, serialize_corpus
from phrasesense.chunker import count_phrases, phrase_totals, write_phrase_counts
from phrasesense.config import read_config, resolve_path
from phrasesense.corpus import Lexicon, read_documents
from phrasesense.errors import (
    PhraseSenseError,
    StageError,
    UsageError,
    file_errors,
    open_text,
)
from phrasesense.evaluation import (
    EvalReport,
    default_thresholds,
    evaluate,
    render_json,
    render_text,
    sweep,
    write_sweep,
)
from phrasesense.matcher import build_forest
from phrasesense.sense_filter import MappingChain, SenseFilter, SenseInventory

logger = logging.getLogger(__name__)

T = TypeVar("T")

SRC_PHRASES = "src-phrases.tsv"
TGT_PHRASES = "tgt-phrases.tsv"
ALIGNMENTS = "alignments.tsv"
ENRICHED = "enriched.xml"
REPORT_TEXT = "report.txt"
REPORT_JSON = "report.json"
SWEEP = "sweep.tsv"


@dataclass(frozen=True)
class PipelineConfig:
    src_corpus: Path
    tgt_corpus: Path
    src_lexicon: Path
    tgt_lexicon: Path
    dictionary: Path
    src_inventory: Path
    tgt_inventory: Path
    corpus: Path
    """The sense-tagged source-language corpus to enrich and score."""
    output_dir: Path
    mappings: tuple[Path, ...] = ()
    src_index: Path | None = None
    tgt_index: Path | None = None
    threshold: int = 1
    """Alignment frequency threshold for the report; the sweep covers all of them."""
    seed: int = 0
    """The seed `fixture` generated the inputs with; logged, never used by a stage."""

    # Config key for each field, the same as the `pipeline` flag.
    KEYS: typing.ClassVar[dict[str, str]] = {
        "src-corpus": "src_corpus",
        "tgt-corpus": "tgt_corpus",
        "src-lexicon": "src_lexicon",
        "tgt-lexicon": "tgt_lexicon",
        "dict": "dictionary",
        "src-inventory": "src_inventory",
        "tgt-inventory": "tgt_inventory",
        "src-index": "src_index",
        "tgt-index": "tgt_index",
        "map": "mappings",
        "corpus": "corpus",
        "output-dir": "output_dir",
        "threshold": "threshold",
        "seed": "seed",
    }

    def __post_init__(self) -> None:
        if self.threshold < 0:
            raise UsageError(f"threshold must be non-negative, not {self.threshold}")

    @classmethod
    def load(cls, path: Path) -> PipelineConfig:
        """Read a pipeline config; relative paths are taken from the config's directory."""
        base = path.parent
        values: dict[str, typing.Any] = {}
        for key, value in read_config(path).items():
            name = cls.KEYS.get(key)
            if name is None:
                raise UsageError(f"{path}: unknown setting `{key}`")
            if name in ("threshold", "seed"):
                if not isinstance(value, int) or isinstance(value, bool):
                    raise UsageError(f"{path}: `{key}` must be an integer")
                values[name] = value
            elif name == "mappings":
                if isinstance(value, str):
                    value = [value]
                values[name] = tuple(resolve_path(item, base) for item in value)
            else:
                values[name] = resolve_path(value, base)
        try:
            return cls(**values)
        except TypeError as err:
            raise UsageError(f"{path}: {err}") from None

    def stage_inputs(self) -> Iterator[tuple[str, str, Path]]:
        """Every input file as (stage, description, path), in pipeline order."""
        yield "chunk", "source corpus", self.src_corpus
        yield "chunk", "target corpus", self.tgt_corpus
        yield "chunk", "source lexicon", self.src_lexicon
        yield "chunk", "target lexicon", self.tgt_lexicon
        yield "align", "dictionary", self.dictionary
        yield "annotate", "source inventory", self.src_inventory
        yield "annotate", "target inventory", self.tgt_inventory
        if self.src_index is not None:
            yield "annotate", "source sense index", self.src_index
        if self.tgt_index is not None:
            yield "annotate", "target sense index", self.tgt_index
        for mapping in self.mappings:
            yield "annotate", "mapping", mapping
        yield "annotate", "sense-tagged corpus", self.corpus


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Tag errors raised inside the block with the stage name."""
    try:
        yield
    except StageError:
        raise
    except (PhraseSenseError, ValueError, OSError) as err:
        raise StageError(name, err) from err


def _run(name: str, func: Callable[[], T]) -> T:
    with stage(name):
        return func()


@dataclass
class Inputs:
    """Everything the pipeline reads, loaded up front."""

    src_lexicon: Lexicon
    tgt_lexicon: Lexicon
    dictionary: BilingualDictionary
    src_inventory: SenseInventory
    tgt_inventory: SenseInventory
    chain: MappingChain
    corpus: Corpus = field(repr=False)


def load_inputs(config: PipelineConfig) -> Inputs:
    for stage_name, description, path in config.stage_inputs():
        if not path.is_file():
            raise StageError(stage_name, f"{description} not found: {path}")

    src_lexicon = _run("chunk", lambda: Lexicon.load(config.src_lexicon))
    tgt_lexicon = _run("chunk", lambda: Lexicon.load(config.tgt_lexicon))
    dictionary = _run("align", lambda: BilingualDictionary.load(config.dictionary))
    with stage("annotate"):
        src_inventory = SenseInventory.load(config.src_inventory, config.src_index, "src")
        tgt_inventory = SenseInventory.load(config.tgt_inventory, config.tgt_index, "tgt")
        chain = MappingChain.load(config.mappings)
        with file_errors(config.corpus), config.corpus.open("rb") as f:
            corpus = parse_corpus(f)
    return Inputs(src_lexicon, tgt_lexicon, dictionary, src_inventory, tgt_inventory, chain, corpus)


def _write_text(path: Path, text: str) -> None:
    with open_text(path, "w") as f:
        f.write(text)


def run_pipeline(config: PipelineConfig) -> EvalReport:
    """Run every stage and write its artifact into `config.output_dir`.

    The corpus is enriched with every alignment; `config.threshold` only applies to the
    report.
    """
    logger.info("Running on inputs generated with seed %d", config.seed)
    inputs = load_inputs(config)
    output_dir = config.output_dir
    with file_errors(output_dir):
        output_dir.mkdir(parents=True, exist_ok=True)

    with stage("chunk"):
        src_counts = count_phrases(read_documents(config.src_corpus, inputs.src_lexicon))
        tgt_counts = count_phrases(read_documents(config.tgt_corpus, inputs.tgt_lexicon))
        for name, counts in ((SRC_PHRASES, src_counts), (TGT_PHRASES, tgt_counts)):
            with open_text(output_dir / name, "w") as f:
                write_phrase_counts(counts, f)
        logger.info("Chunked %d source and %d target phrases", len(src_counts), len(tgt_counts))

    with stage("align"):
        table: AlignmentTable = align_corpora(
            phrase_totals(src_counts), phrase_totals(tgt_counts), inputs.dictionary
        )
        with open_text(output_dir / ALIGNMENTS, "w") as f:
            table.write(f)

    with stage("annotate"):
        sense_filter = SenseFilter(inputs.tgt_inventory, inputs.src_inventory, inputs.chain)
        enriched = annotate(
            inputs.corpus,
            build_forest(table.source_keys()),
            table,
            sense_filter,
            inputs.src_lexicon,
        )
        with file_errors(output_dir / ENRICHED):
            (output_dir / ENRICHED).write_bytes(serialize_corpus(enriched))

    with stage("evaluate"):
        report = evaluate(enriched, config.threshold)
        _write_text(output_dir / REPORT_TEXT, render_text(report))
        _write_text(output_dir / REPORT_JSON, render_json(report))

    with stage("sweep"):
        with open_text(output_dir / SWEEP, "w") as f:
            write_sweep(sweep(enriched, default_thresholds(enriched)), f)

    logger.info("Wrote pipeline artifacts to %s", output_dir)
    return report
