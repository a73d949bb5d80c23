"""Command-line interface: one subcommand per stage, plus `pipeline` to run them all."""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn, TextIO

from phrasesense import __version__
from phrasesense.aligner import AlignmentTable, BilingualDictionary, align_corpora
from phrasesense.annotator import Corpus, annotate, parse_corpus, serialize_corpus
from phrasesense.chunker import count_phrases, read_phrase_counts, write_phrase_counts
from phrasesense.config import read_config, resolve_path
from phrasesense.corpus import Lexicon, read_documents
from phrasesense.errors import DataError, PhraseSenseError, UsageError, file_errors, open_text
from phrasesense.evaluation import (
    evaluate,
    render_json,
    render_text,
    render_tsv,
    sweep,
    write_sweep,
)
from phrasesense.fixture import (
    DEFAULT_FILLER_PHRASES,
    DEFAULT_FILLER_SENTENCES,
    DEFAULT_SEED,
    generate_fixture,
)
from phrasesense.matcher import build_forest, match_text
from phrasesense.pipeline import PipelineConfig, run_pipeline
from phrasesense.sense_filter import MappingChain, SenseFilter, SenseInventory, SynsetMapping

logger = logging.getLogger(__name__)

# Options that may be given several times; a config list replaces them rather than adding.
_REPEATABLE = frozenset({"mappings"})
_NOT_CONFIGURABLE = frozenset({"config", "version", "help"})


class ArgumentParser(argparse.ArgumentParser):
    """Exit with the usage error code instead of argparse's 2, and index long options."""

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        # `--help` is added during `__init__`.
        self.long_options: dict[str, argparse.Action] = {}
        super().__init__(*args, **kwargs)

    def add_argument(self, *args: Any, **kwargs: Any) -> argparse.Action:
        action = super().add_argument(*args, **kwargs)
        for option in action.option_strings:
            if option.startswith("--"):
                self.long_options[option[2:]] = action
        return action

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(UsageError.exit_code, f"{self.prog}: error: {message}\n")


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, not `{text}`") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, not {value}")
    return value


def _thresholds(text: str) -> list[int]:
    values = [_non_negative(item.strip()) for item in text.split(",") if item.strip()]
    if not values:
        raise argparse.ArgumentTypeError("expected at least one threshold")
    if values != sorted(values):
        raise argparse.ArgumentTypeError(f"thresholds must be ascending: {text}")
    return values


def _existing(path: Path, description: str) -> Path:
    if not path.is_file():
        raise DataError(f"{description} not found: {path}")
    return path


def _require(args: argparse.Namespace, *dests: str) -> None:
    missing = [f"--{dest.replace('_', '-')}" for dest in dests if getattr(args, dest) is None]
    if missing:
        raise UsageError(f"`{args.command}` requires {', '.join(missing)}")


def _open_output(path: Path) -> contextlib.AbstractContextManager[TextIO]:
    with file_errors(path.parent):
        path.parent.mkdir(parents=True, exist_ok=True)
    return open_text(path, "w")


def _read_corpus(path: Path) -> Corpus:
    path = _existing(path, "corpus")
    with file_errors(path), path.open("rb") as f:
        return parse_corpus(f)


def _load_filter(args: argparse.Namespace) -> SenseFilter:
    tgt_inventory = SenseInventory.load(
        _existing(args.tgt_inventory, "target inventory"), args.tgt_index, "tgt"
    )
    src_inventory = SenseInventory.load(
        _existing(args.src_inventory, "source inventory"), args.src_index, "src"
    )
    chain = MappingChain.load(_existing(path, "mapping") for path in args.mappings or ())
    return SenseFilter(tgt_inventory, src_inventory, chain, args.threshold)


def chunk(args: argparse.Namespace) -> int:
    _require(args, "lexicon", "input", "output")
    lexicon = Lexicon.load(_existing(args.lexicon, "lexicon"))
    counts = count_phrases(read_documents(_existing(args.input, "input"), lexicon))
    with _open_output(args.output) as f:
        write_phrase_counts(counts, f)
    logger.info("Wrote %d phrase counts to %s", len(counts), args.output)
    return 0


def align(args: argparse.Namespace) -> int:
    _require(args, "dict", "src", "tgt", "output")
    dictionary = BilingualDictionary.load(_existing(args.dict, "dictionary"))
    table = align_corpora(
        read_phrase_counts(_existing(args.src, "source phrases")),
        read_phrase_counts(_existing(args.tgt, "target phrases")),
        dictionary,
    )
    with _open_output(args.output) as f:
        table.write(f)
    return 0


def match(args: argparse.Namespace) -> int:
    _require(args, "forest", "lexicon", "input")
    phrases = read_phrase_counts(_existing(args.forest, "phrase file"))
    forest = build_forest(entry.key for entry in phrases)
    lexicon = Lexicon.load(_existing(args.lexicon, "lexicon"))
    offset = 0
    for document in read_documents(_existing(args.input, "input"), lexicon):
        for sentence in document.sentences:
            for found in match_text(sentence.tokens, forest):
                print(f"{offset + found.start}\t{offset + found.end}\t{found.phrase_key}")
            offset += len(sentence.tokens)
    return 0


def annotate_command(args: argparse.Namespace) -> int:
    _require(args, "corpus", "alignments", "src_inventory", "tgt_inventory", "output")
    table = AlignmentTable.load(_existing(args.alignments, "alignment table"))
    lexicon = Lexicon.load(_existing(args.lexicon, "lexicon")) if args.lexicon else Lexicon()
    sense_filter = _load_filter(args)
    corpus = _read_corpus(args.corpus)
    enriched = annotate(corpus, build_forest(table.source_keys()), table, sense_filter, lexicon)
    with file_errors(args.output):
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_bytes(serialize_corpus(enriched))
    return 0


def evaluate_command(args: argparse.Namespace) -> int:
    _require(args, "corpus")
    if args.json and args.tsv:
        raise UsageError("--json and --tsv cannot be combined")
    report = evaluate(_read_corpus(args.corpus), args.threshold)
    if args.json:
        sys.stdout.write(render_json(report))
    elif args.tsv:
        sys.stdout.write(render_tsv(report))
    else:
        sys.stdout.write(render_text(report))
    return 0


def sweep_command(args: argparse.Namespace) -> int:
    _require(args, "corpus", "output")
    rows = sweep(_read_corpus(args.corpus), args.thresholds)
    with _open_output(args.output) as f:
        write_sweep(rows, f)
    if args.plot is not None:
        from phrasesense.plot import plot_sweep

        with file_errors(args.plot):
            plot_sweep(rows, args.plot)
    return 0


def pipeline_command(args: argparse.Namespace) -> int:
    _require(
        args,
        "src_corpus",
        "tgt_corpus",
        "src_lexicon",
        "tgt_lexicon",
        "dict",
        "src_inventory",
        "tgt_inventory",
        "corpus",
        "output_dir",
    )
    config = PipelineConfig(
        src_corpus=args.src_corpus,
        tgt_corpus=args.tgt_corpus,
        src_lexicon=args.src_lexicon,
        tgt_lexicon=args.tgt_lexicon,
        dictionary=args.dict,
        src_inventory=args.src_inventory,
        tgt_inventory=args.tgt_inventory,
        corpus=args.corpus,
        output_dir=args.output_dir,
        mappings=tuple(args.mappings or ()),
        src_index=args.src_index,
        tgt_index=args.tgt_index,
        threshold=args.threshold,
        seed=args.seed,
    )
    sys.stdout.write(render_text(run_pipeline(config)))
    return 0


def fixture_command(args: argparse.Namespace) -> int:
    _require(args, "output_dir")
    with file_errors(args.output_dir):
        config_path = generate_fixture(
            args.output_dir, args.seed, args.filler_phrases, args.filler_sentences
        )
    print(config_path)
    return 0


def invert(args: argparse.Namespace) -> int:
    _require(args, "mapping", "output")
    inverse = SynsetMapping.load(_existing(args.mapping, "mapping")).inverse()
    with _open_output(args.output) as f:
        inverse.write(f)
    return 0


def _add_filter_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--src-inventory", type=Path, help="Source-language synset file.")
    parser.add_argument("--src-index", type=Path, help="Sense index for the source inventory.")
    parser.add_argument("--tgt-inventory", type=Path, help="Target-language synset file.")
    parser.add_argument("--tgt-index", type=Path, help="Sense index for the target inventory.")
    parser.add_argument(
        "--map",
        dest="mappings",
        type=Path,
        action="append",
        help="Synset mapping from target to source ids; repeat to chain, applied in order.",
    )


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="TOML file with defaults for any flag.")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress.")


def build_parser() -> tuple[ArgumentParser, dict[str, ArgumentParser]]:
    parser = ArgumentParser(
        prog="phrasesense",
        description="Filter word senses with noun phrases aligned across comparable corpora.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="<command>")
    commands: dict[str, ArgumentParser] = {}

    def add(name: str, handler: Callable[[argparse.Namespace], int], help: str) -> ArgumentParser:
        subparser = subparsers.add_parser(name, help=help, description=help)
        _add_common_options(subparser)
        subparser.set_defaults(handler=handler)
        commands[name] = subparser
        return subparser

    sub = add("chunk", chunk, "Count noun-phrase candidates in a plain-text corpus.")
    sub.add_argument("--lexicon", type=Path, help="Lexicon for the corpus language.")
    sub.add_argument("--input", type=Path, help="One sentence per line.")
    sub.add_argument("--output", type=Path, help="Phrase count file to write.")

    sub = add("align", align, "Align the phrases of two corpora through a bilingual dictionary.")
    sub.add_argument("--dict", type=Path, help="Bilingual dictionary.")
    sub.add_argument("--src", type=Path, help="Source phrase counts.")
    sub.add_argument("--tgt", type=Path, help="Target phrase counts.")
    sub.add_argument("--output", type=Path, help="Alignment table to write.")

    sub = add("match", match, "Print the stored phrases found in a plain-text corpus.")
    sub.add_argument("--forest", type=Path, help="Phrase count file holding the phrases to find.")
    sub.add_argument("--lexicon", type=Path, help="Lexicon for the corpus language.")
    sub.add_argument("--input", type=Path, help="One sentence per line.")

    sub = add("annotate", annotate_command, "Add phrase and alignment attributes to a corpus.")
    sub.add_argument("--corpus", type=Path, help="Sense-tagged XML corpus.")
    sub.add_argument("--alignments", type=Path, help="Alignment table.")
    sub.add_argument("--lexicon", type=Path, help="Lexicon for words without a lemma.")
    _add_filter_options(sub)
    sub.add_argument("--threshold", type=_non_negative, default=0, help="Minimum frequency.")
    sub.add_argument("--output", type=Path, help="Enriched corpus to write.")

    sub = add("evaluate", evaluate_command, "Report coverage and potential precision.")
    sub.add_argument("--corpus", type=Path, help="Enriched corpus.")
    sub.add_argument("--threshold", type=_non_negative, default=1, help="Minimum frequency.")
    sub.add_argument("--json", action="store_true", help="Print the report as JSON.")
    sub.add_argument("--tsv", action="store_true", help="Print the report as TSV.")

    sub = add("sweep", sweep_command, "Evaluate an enriched corpus at several thresholds.")
    sub.add_argument("--corpus", type=Path, help="Enriched corpus.")
    sub.add_argument(
        "--thresholds",
        type=_thresholds,
        help="Comma-separated ascending thresholds (default: 0 and every frequency present).",
    )
    sub.add_argument("--output", type=Path, help="Sweep TSV to write.")
    sub.add_argument("--plot", type=Path, help="Also draw the sweep to this image file.")

    sub = add("pipeline", pipeline_command, "Run chunk, align, annotate, evaluate and sweep.")
    sub.add_argument("--src-corpus", type=Path, help="Source-language plain-text corpus.")
    sub.add_argument("--tgt-corpus", type=Path, help="Target-language plain-text corpus.")
    sub.add_argument("--src-lexicon", type=Path, help="Source-language lexicon.")
    sub.add_argument("--tgt-lexicon", type=Path, help="Target-language lexicon.")
    sub.add_argument("--dict", type=Path, help="Bilingual dictionary.")
    _add_filter_options(sub)
    sub.add_argument("--corpus", type=Path, help="Sense-tagged XML corpus to enrich.")
    sub.add_argument("--output-dir", type=Path, help="Directory for every artifact.")
    sub.add_argument("--threshold", type=_non_negative, default=1, help="Report threshold.")
    sub.add_argument(
        "--seed", type=int, default=0, help="Seed the inputs were generated with; only logged."
    )

    sub = add("fixture", fixture_command, "Generate a synthetic experiment and its config.")
    sub.add_argument("--output-dir", type=Path, help="Directory to write into.")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--filler-phrases", type=_non_negative, default=DEFAULT_FILLER_PHRASES)
    sub.add_argument("--filler-sentences", type=_non_negative, default=DEFAULT_FILLER_SENTENCES)

    sub = add("invert", invert, "Write the inverse of a synset mapping.")
    sub.add_argument("--map", dest="mapping", type=Path, help="Mapping to invert.")
    sub.add_argument("--output", type=Path, help="Inverse mapping to write.")

    return parser, commands


def _apply_config(
    parser: ArgumentParser,
    subparser: ArgumentParser,
    argv: Sequence[str],
    args: argparse.Namespace,
) -> argparse.Namespace:
    """Use the config file as subcommand defaults and parse again; flags win."""
    config_path: Path = args.config
    base = config_path.parent
    defaults: dict[str, object] = {}
    repeated: dict[str, list[Path]] = {}
    for key, value in read_config(config_path).items():
        action = subparser.long_options.get(key)
        if action is None or action.dest in _NOT_CONFIGURABLE:
            raise UsageError(f"{config_path}: unknown setting `{key}` for `{args.command}`")
        if action.dest in _REPEATABLE:
            items = [value] if isinstance(value, str) else list(value)
            repeated[action.dest] = [resolve_path(str(item), base) for item in items]
        elif action.nargs == 0:
            if not isinstance(value, bool):
                raise UsageError(f"{config_path}: `{key}` must be true or false")
            defaults[action.dest] = value
        elif action.type is Path:
            defaults[action.dest] = str(resolve_path(str(value), base))
        elif isinstance(value, list):
            defaults[action.dest] = ",".join(str(item) for item in value)
        elif isinstance(value, int) and not isinstance(value, bool):
            defaults[action.dest] = str(value)
        else:
            defaults[action.dest] = value

    subparser.set_defaults(**defaults)
    args = parser.parse_args(argv)
    for dest, paths in repeated.items():
        if getattr(args, dest) is None:
            setattr(args, dest, paths)
    return args


def main(argv: Sequence[str] | None = None) -> int:
    parser, commands = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help(sys.stderr)
        return UsageError.exit_code

    try:
        if args.config is not None:
            args = _apply_config(parser, commands[args.command], argv, args)
        logging.basicConfig(
            level=logging.INFO if args.verbose else logging.WARNING,
            format="%(levelname)s: %(message)s",
        )
        return args.handler(args)
    except PhraseSenseError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code


if __name__ == "__main__":
    sys.exit(main())
