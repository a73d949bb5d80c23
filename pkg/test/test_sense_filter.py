from __future__ import annotations

import io
import logging
import random
from pathlib import Path

import pytest
from conftest import GOLDEN_DIR

from phrasesense.aligner import AlignmentTable
from phrasesense.errors import DataError, InvariantError
from phrasesense.pipeline import Inputs
from phrasesense.sense_filter import (
    MappingChain,
    SenseFilter,
    SenseInventory,
    SynsetMapping,
    filter_senses,
    map_synset,
)

SOURCE = SenseInventory.from_synsets(
    "en",
    [
        ("issue.n.01", ["issue", "topic"]),
        ("issue.n.02", ["issue", "edition"]),
        ("issue.n.03", ["issue", "offspring"]),
        ("abortion.n.01", ["abortion"]),
    ],
)
TARGET = SenseInventory.from_synsets(
    "es",
    [
        ("es.tema.n.01", ["tema", "asunto"]),
        ("es.tema.n.02", ["tema"]),
        ("es.aborto.n.01", ["aborto"]),
    ],
)
ILI = SynsetMapping(
    "es-ili",
    {"es.tema.n.01": "issue.n.01", "es.tema.n.02": "motif.n.01", "es.aborto.n.01": "abortion.n.01"},
)
CHAIN = MappingChain((ILI,))
TABLE = AlignmentTable.from_rows(
    [
        ("abortion issue", "tema de aborto", 3, ("tema", "aborto")),
        ("abortion issue", "asunto de aborto", 1, ("asunto", "aborto")),
    ]
)


def test_inventory() -> None:
    assert SOURCE.senses_of("issue") == ("issue.n.01", "issue.n.02", "issue.n.03")
    assert SOURCE.senses_of("unknown") == ()
    assert SOURCE.sense_number("issue", "issue.n.02") == 2
    assert SOURCE.synsets["issue.n.01"] == {"issue", "topic"}


def test_inventory_invariants() -> None:
    with pytest.raises(InvariantError):
        SenseInventory("en", {"issue.n.01": frozenset({"issue"})}, {"issue": ()})
    with pytest.raises(InvariantError):
        SenseInventory("en", {"issue.n.01": frozenset()}, {"issue": ("issue.n.01",)})
    with pytest.raises(InvariantError):
        SenseInventory(
            "en",
            {"issue.n.01": frozenset({"issue"})},
            {"issue": ("issue.n.01", "issue.n.01")},
        )


def test_inventory_load(tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
    synsets = tmp_path / "en.syn"
    synsets.write_text(
        "# synset\tlemmas\n"
        "issue.n.01\tissue,topic\n"
        "issue.n.02\tIssue, edition\n"
        "issue.n.01\ttopic\n",
        encoding="utf-8",
    )
    index = tmp_path / "en.idx"
    index.write_text(
        "issue\tissue.n.02\t1\tissue%1:10:00::\nissue\tissue.n.01\t2\n",
        encoding="utf-8",
    )
    with caplog.at_level(logging.WARNING):
        inventory = SenseInventory.load(synsets)
    assert "listed again" in caplog.text
    assert inventory.language == "en"
    assert inventory.senses_of("issue") == ("issue.n.01", "issue.n.02")

    inventory = SenseInventory.load(synsets, index, "src")
    assert inventory.language == "src"
    assert inventory.senses_of("issue") == ("issue.n.02", "issue.n.01")
    assert inventory.sense_key("issue.n.02", "issue") == "issue%1:10:00::"
    assert inventory.sense_key("issue.n.01", "issue") is None


@pytest.mark.parametrize(
    ("synsets", "index", "message"),
    [
        ("issue.n.01\n", None, r"en\.syn:1"),
        ("issue.n.01\t , \n", None, "has no lemmas"),
        ("issue.n.01\tissue\n", "issue\tissue.n.01\n", r"en\.idx:1"),
        ("issue.n.01\tissue\n", "issue\tissue.n.01\tfirst\n", "must be an integer"),
        ("issue.n.01\tissue\n", "issue\tissue.n.09\t1\n", "synsets without it"),
    ],
)
def test_inventory_load_malformed(
    tmp_path: Path, synsets: str, index: str | None, message: str
) -> None:
    synsets_path = tmp_path / "en.syn"
    synsets_path.write_text(synsets, encoding="utf-8")
    index_path = None
    if index is not None:
        index_path = tmp_path / "en.idx"
        index_path.write_text(index, encoding="utf-8")
    with pytest.raises(DataError, match=message):
        SenseInventory.load(synsets_path, index_path)


def test_map_synset() -> None:
    assert map_synset("es.tema.n.01", MappingChain()) == "es.tema.n.01"
    assert map_synset("es.tema.n.01", MappingChain((ILI,))) == "issue.n.01"
    assert map_synset("es.unknown.n.01", MappingChain((ILI,))) is None

    renumber = SynsetMapping("wn15-wn16", {"issue.n.01": "issue.n.04"})
    assert map_synset("es.tema.n.01", MappingChain((ILI, renumber))) == "issue.n.04"
    # A synset lost anywhere along the chain stays lost.
    assert map_synset("es.aborto.n.01", MappingChain((ILI, renumber))) is None


def test_filter_senses() -> None:
    result = filter_senses("issue", "abortion issue", TABLE, TARGET, CHAIN, SOURCE, 0)
    assert result.covered
    assert dict(result.admissible) == {"issue.n.01": 4}
    assert [(s.target_key, s.frequency, s.synsets) for s in result.support] == [
        ("tema de aborto", 3, ("issue.n.01",)),
        ("asunto de aborto", 1, ("issue.n.01",)),
    ]

    result = filter_senses("issue", "abortion issue", TABLE, TARGET, CHAIN, SOURCE, 2)
    assert dict(result.admissible) == {"issue.n.01": 3}

    result = filter_senses("issue", "abortion issue", TABLE, TARGET, CHAIN, SOURCE, 4)
    assert not result.covered
    assert dict(result.admissible) == {}


def test_filter_senses_without_support() -> None:
    result = filter_senses("issue", "abortion issue", TABLE, TARGET, MappingChain(), SOURCE, 0)
    assert result.covered
    assert dict(result.admissible) == {}
    assert [s.synsets for s in result.support] == [(), ()]

    result = filter_senses("issue", "year old", TABLE, TARGET, CHAIN, SOURCE, 0)
    assert not result.covered

    with pytest.raises(ValueError):
        filter_senses("issue", "abortion issue", TABLE, TARGET, MappingChain(), SOURCE, -1)


def test_alignment_supports_a_sense_once() -> None:
    # `tema` and `asunto` both lead to issue.n.01.
    table = AlignmentTable.from_rows([("abortion issue", "tema asunto", 5, ("tema", "asunto"))])
    sense_filter = SenseFilter(TARGET, SOURCE, MappingChain((ILI,)))
    assert dict(sense_filter("issue", "abortion issue", table).admissible) == {"issue.n.01": 5}


@pytest.fixture(scope="module")
def fixture_table() -> AlignmentTable:
    return AlignmentTable.load(GOLDEN_DIR / "alignments.tsv")


def fixture_filter(inputs: Inputs, threshold: int = 0) -> SenseFilter:
    return SenseFilter(inputs.tgt_inventory, inputs.src_inventory, inputs.chain, threshold)


def test_filter_keeps_the_one_supported_sense(
    fixture_inputs: Inputs, fixture_table: AlignmentTable
) -> None:
    result = fixture_filter(fixture_inputs)("head", "head of the family", fixture_table)
    assert dict(result.admissible) == {"head.n.04": 8}
    assert fixture_inputs.src_inventory.sense_key("head.n.04", "head") == "head%1:18:00::"


def test_filter_keeps_every_sense(fixture_inputs: Inputs, fixture_table: AlignmentTable) -> None:
    result = fixture_filter(fixture_inputs)("year", "year old", fixture_table)
    assert list(result.admissible) == list(fixture_inputs.src_inventory.senses_of("year"))


def test_filter_loses_unmapped_sense(
    fixture_inputs: Inputs, fixture_table: AlignmentTable
) -> None:
    result = fixture_filter(fixture_inputs)("art", "art study", fixture_table)
    senses = fixture_inputs.src_inventory.senses_of("art")
    assert list(result.admissible) == [s for s in senses if s != "art%1:09:00::"]
    assert map_synset("arte%1:09:00::", fixture_inputs.chain) is None


def test_filter_joins_several_alignments(
    fixture_inputs: Inputs, fixture_table: AlignmentTable
) -> None:
    result = fixture_filter(fixture_inputs)("number", "number of voter", fixture_table)
    assert len(fixture_inputs.src_inventory.senses_of("number")) == 11
    assert len(result.admissible) == 8
    assert result.admissible["number.n.02"] == 7
    assert result.admissible["number.n.07"] == 1


def test_raising_the_threshold_only_drops_senses(
    fixture_inputs: Inputs, fixture_table: AlignmentTable
) -> None:
    words = [
        ("head", "head of the family"),
        ("year", "year old"),
        ("art", "art study"),
        ("number", "number of voter"),
        ("voter", "number of voter"),
        ("issue", "abortion issue"),
    ]
    for target, phrase_key in words:
        previous = None
        for threshold in range(14):
            sense_filter = fixture_filter(fixture_inputs, threshold)
            kept = set(sense_filter(target, phrase_key, fixture_table).admissible)
            if previous is not None:
                assert kept <= previous
            previous = kept


def test_synset_mapping_file(tmp_path: Path) -> None:
    path = tmp_path / "es-ili.map"
    path.write_text("# from\tto\nes.tema.n.01\tissue.n.01\n\nes.aborto.n.01\tabortion.n.01\n")
    mapping = SynsetMapping.load(path)
    assert mapping.name == "es-ili"
    assert mapping.get("es.tema.n.01") == "issue.n.01"
    buffer = io.StringIO()
    mapping.write(buffer)
    assert buffer.getvalue() == "es.aborto.n.01\tabortion.n.01\nes.tema.n.01\tissue.n.01\n"

    path.write_text("es.tema.n.01\tissue.n.01\nes.tema.n.01\tissue.n.02\n")
    with pytest.raises(DataError, match="mapped twice"):
        SynsetMapping.load(path)
    path.write_text("es.tema.n.01\n")
    with pytest.raises(DataError, match=r"es-ili\.map:1"):
        SynsetMapping.load(path)


def test_inverse_mapping(caplog: pytest.LogCaptureFixture) -> None:
    rng = random.Random(17)
    for _ in range(100):
        targets = rng.sample(range(1000), 30)
        mapping = SynsetMapping("m", {f"a{i}": f"b{t}" for i, t in enumerate(targets)})
        inverse = mapping.inverse()
        for source, target in mapping.pairs.items():
            assert map_synset(source, MappingChain((mapping, inverse))) == source
            assert inverse.get(target) == source

    collision = SynsetMapping("m", {"a1": "b", "a2": "b"})
    with caplog.at_level(logging.WARNING):
        assert collision.inverse().pairs == {"b": "a1"}
    assert "image of both" in caplog.text


def test_function_words_support_nothing() -> None:
    # `de` is also a noun (the letter) and its synset leads to a sense of `head`.
    source = SenseInventory.from_synsets(
        "en", [("head.n.01", ["head", "chief"]), ("head.n.04", ["head"])]
    )
    target = SenseInventory.from_synsets("es", [("es-r", ["responsable"]), ("es-de", ["de"])])
    chain = MappingChain((SynsetMapping("es-ili", {"es-r": "head.n.01", "es-de": "head.n.04"}),))
    table = AlignmentTable.from_rows(
        [("head of the family", "responsable de la familia", 5, ("responsable", "familia"))]
    )
    result = filter_senses("head", "head of the family", table, target, chain, source, 0)
    assert dict(result.admissible) == {"head.n.01": 5}


SOURCE_WORDS = [f"w{i}" for i in range(5)]
TARGET_WORDS = [f"t{i}" for i in range(5)]


def random_inventory(
    rng: random.Random, language: str, prefix: str, words: list[str]
) -> SenseInventory:
    # Ten synsets, so no word has more than ten senses.
    rows = [(f"{prefix}{i}", rng.sample(words, rng.randint(1, 3))) for i in range(10)]
    return SenseInventory.from_synsets(language, rows)


def random_chain(rng: random.Random) -> MappingChain:
    ili = {f"e{i}": f"m{rng.randrange(8)}" for i in range(10) if rng.random() < 0.7}
    release = {f"m{i}": f"s{rng.randrange(10)}" for i in range(8) if rng.random() < 0.7}
    return MappingChain((SynsetMapping("ili", ili), SynsetMapping("release", release)))


def random_table(rng: random.Random) -> AlignmentTable:
    rows = []
    for _ in range(rng.randint(1, 4)):
        lemmas = rng.sample(TARGET_WORDS, rng.randint(1, 3))
        # `de` carries synsets of its own but is never an open-class word.
        rows.append(("p q", " de ".join(lemmas), rng.randint(1, 9), lemmas))
    return AlignmentTable.from_rows(rows)


def brute_force_filter(
    target: str,
    table: AlignmentTable,
    tgt_inventory: SenseInventory,
    chain: MappingChain,
    src_inventory: SenseInventory,
    threshold: int,
) -> dict[str, int]:
    def image(synset: str | None) -> str | None:
        for mapping in chain:
            synset = mapping.pairs.get(synset) if synset is not None else None
        return synset

    admissible = {}
    for sense in src_inventory.senses_of(target):
        total = sum(
            alignment.frequency
            for alignment in table.alignments("p q")
            if alignment.frequency >= threshold
            and any(
                image(synset) == sense
                for word in alignment.target_lemmas
                for synset in tgt_inventory.senses_of(word)
            )
        )
        if total:
            admissible[sense] = total
    return admissible


def test_filter_senses_matches_brute_force() -> None:
    rng = random.Random(31)
    for _ in range(300):
        source = random_inventory(rng, "en", "s", SOURCE_WORDS)
        target = random_inventory(rng, "es", "e", [*TARGET_WORDS, "de"])
        chain = random_chain(rng)
        table = random_table(rng)
        word = rng.choice(SOURCE_WORDS)
        threshold = rng.randint(0, 10)
        result = filter_senses(word, "p q", table, target, chain, source, threshold)
        expected = brute_force_filter(word, table, target, chain, source, threshold)
        assert result.admissible == expected
        assert list(result.admissible) == [s for s in source.senses_of(word) if s in expected]
        assert result.covered == any(a.frequency >= threshold for a in table.alignments("p q"))


def test_adding_a_mapping_pair_only_adds_senses() -> None:
    rng = random.Random(32)
    for _ in range(300):
        source = random_inventory(rng, "en", "s", SOURCE_WORDS)
        target = random_inventory(rng, "es", "e", [*TARGET_WORDS, "de"])
        ili, release = random_chain(rng)
        table = random_table(rng)
        word = rng.choice(SOURCE_WORDS)
        before = filter_senses(word, "p q", table, target, MappingChain((ili, release)), source, 0)

        unmapped = [f"e{i}" for i in range(10) if ili.get(f"e{i}") is None]
        if unmapped:
            ili = ili.with_pair(rng.choice(unmapped), f"m{rng.randrange(8)}")
        unmapped = [f"m{i}" for i in range(8) if release.get(f"m{i}") is None]
        if unmapped:
            release = release.with_pair(rng.choice(unmapped), f"s{rng.randrange(10)}")
        after = filter_senses(word, "p q", table, target, MappingChain((ili, release)), source, 0)

        for synset, frequency in before.admissible.items():
            assert after.admissible[synset] >= frequency


def test_with_pair_cannot_redirect() -> None:
    assert ILI.with_pair("es.tema.n.01", "issue.n.01") == ILI
    assert ILI.with_pair("es.asunto.n.09", "issue.n.02").get("es.asunto.n.09") == "issue.n.02"
    with pytest.raises(InvariantError, match="already mapped"):
        ILI.with_pair("es.tema.n.01", "issue.n.02")


def test_identity_chain_keeps_every_sense() -> None:
    rng = random.Random(33)
    for _ in range(100):
        inventory = random_inventory(rng, "en", "s", SOURCE_WORDS)
        identity = SynsetMapping("identity", {synset: synset for synset in inventory.synsets})
        for word in SOURCE_WORDS:
            frequency = rng.randint(1, 9)
            table = AlignmentTable.from_rows([("p q", f"{word} de x", frequency, (word,))])
            for chain in (MappingChain(), MappingChain((identity,))):
                result = filter_senses(word, "p q", table, inventory, chain, inventory, 0)
                assert list(result.admissible) == list(inventory.senses_of(word))
                assert set(result.admissible.values()) <= {frequency}
