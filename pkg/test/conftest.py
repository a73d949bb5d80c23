from __future__ import annotations

from pathlib import Path

import pytest

from phrasesense.annotator import Corpus, parse_corpus
from phrasesense.corpus import PosTag, Sentence, Token
from phrasesense.evaluation import EvalReport
from phrasesense.fixture import generate_fixture
from phrasesense.pipeline import Inputs, PipelineConfig, load_inputs, run_pipeline

TEST_DIR = Path(__file__).parent
GOLDEN_DIR = TEST_DIR / "golden"
FIXTURES_DIR = TEST_DIR / "fixtures"

TAGS = {
    "n": PosTag.NOUN,
    "a": PosTag.ADJECTIVE,
    "p": PosTag.PREPOSITION,
    "d": PosTag.DETERMINER,
    "c": PosTag.CONJUNCTION,
    "v": PosTag.VERB,
    "o": PosTag.OTHER,
}


def tagged(text: str) -> Sentence:
    """Build a sentence from `surface/tag` or `surface/tag/lemma` units, tags as in `TAGS`."""
    tokens = []
    for unit in text.split():
        surface, tag, *lemma = unit.split("/")
        tokens.append(Token(surface, lemma[0] if lemma else surface.lower(), TAGS[tag]))
    return Sentence(tuple(tokens))


def load_corpus(path: Path) -> Corpus:
    with path.open("rb") as f:
        return parse_corpus(f)


@pytest.fixture(scope="session")
def fixture_config(tmp_path_factory: pytest.TempPathFactory) -> PipelineConfig:
    """The core fixture without filler, as committed in the golden files."""
    output_dir = tmp_path_factory.mktemp("fixture")
    config_path = generate_fixture(output_dir, seed=42, filler_phrases=0, filler_sentences=0)
    return PipelineConfig.load(config_path)


@pytest.fixture(scope="session")
def fixture_inputs(fixture_config: PipelineConfig) -> Inputs:
    return load_inputs(fixture_config)


@pytest.fixture(scope="session")
def fixture_run(fixture_config: PipelineConfig) -> tuple[EvalReport, Path]:
    report = run_pipeline(fixture_config)
    return report, fixture_config.output_dir
