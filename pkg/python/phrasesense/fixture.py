"""Generate a small synthetic English/Spanish experiment.

The core of the fixture is fixed and covers the interesting filtering cases:

- `head of the family` aligns with `responsable de la cámara`, whose only path back to a
  sense of `head` goes through the `{head, chief, top_dog}` synset.
- `year old` aligns with `año de edad`, which supports every sense of `year`.
- `friend of mine` aligns with `conocido de la mina`, which supports the wrong sense.
- `art study` aligns with `estudio de arte`, but one sense of `arte` has no image in the
  release-to-release mapping, so that sense of `art` is lost.
- `number of voter` aligns with three phrases that together keep 8 of the 11 senses of
  `number`.

On top of it, `seed` draws filler noun-noun phrases, their translations, their senses and
some extra sense-tagged sentences, and shuffles the corpus lines.
"""

from __future__ import annotations

import logging
import random
import xml.etree.ElementTree as ET
from pathlib import Path

import tomli_w

from phrasesense.errors import open_text

logger = logging.getLogger(__name__)

DEFAULT_SEED = 42
DEFAULT_FILLER_PHRASES = 8
DEFAULT_FILLER_SENTENCES = 6

SRC_LINES = (
    ("The head of the family spoke .", 8),
    ("He was ten years old .", 12),
    ("A friend of mine came .", 1),
    ("Art studies flourished .", 2),
    ("The number of voters grew .", 5),
    ("The abortion issue arose .", 3),
)

TGT_LINES = (
    ("El responsable de la cámara habló .", 8),
    ("Tiene diez años de edad .", 12),
    ("Un conocido de las minas llegó .", 1),
    ("Los estudios de arte crecieron .", 3),
    ("El número de votantes creció .", 5),
    ("La cifra de electores creció .", 2),
    ("La cantidad de votantes creció .", 1),
    ("El tema del aborto surgió .", 4),
)

SRC_LEXICON = (
    ("the", "the", "determiner"),
    ("a", "a", "determiner"),
    ("of", "of", "preposition"),
    ("abortion", "abortion", "noun"),
    ("art", "art", "noun"),
    ("family", "family", "noun"),
    ("friend", "friend", "noun"),
    ("head", "head", "noun"),
    ("issue", "issue", "noun"),
    ("mine", "mine", "noun"),
    ("number", "number", "noun"),
    ("studies", "study", "noun"),
    ("study", "study", "noun"),
    ("voter", "voter", "noun"),
    ("voters", "voter", "noun"),
    ("year", "year", "noun"),
    ("years", "year", "noun"),
    ("old", "old", "adjective"),
    ("arose", "arise", "verb"),
    ("came", "come", "verb"),
    ("changed", "change", "verb"),
    ("flourished", "flourish", "verb"),
    ("grew", "grow", "verb"),
    ("spoke", "speak", "verb"),
    ("was", "be", "verb"),
)

TGT_LEXICON = (
    ("el", "el", "determiner"),
    ("la", "la", "determiner"),
    ("las", "la", "determiner"),
    ("los", "el", "determiner"),
    ("un", "un", "determiner"),
    ("de", "de", "preposition"),
    ("del", "de", "preposition"),
    ("aborto", "aborto", "noun"),
    ("arte", "arte", "noun"),
    ("años", "año", "noun"),
    ("cantidad", "cantidad", "noun"),
    ("cifra", "cifra", "noun"),
    ("conocido", "conocido", "noun"),
    ("cámara", "cámara", "noun"),
    ("edad", "edad", "noun"),
    ("electores", "elector", "noun"),
    ("estudios", "estudio", "noun"),
    ("minas", "mina", "noun"),
    ("número", "número", "noun"),
    ("responsable", "responsable", "noun"),
    ("tema", "tema", "noun"),
    ("votantes", "votante", "noun"),
    ("cambió", "cambiar", "verb"),
    ("creció", "crecer", "verb"),
    ("crecieron", "crecer", "verb"),
    ("habló", "hablar", "verb"),
    ("llegó", "llegar", "verb"),
    ("surgió", "surgir", "verb"),
    ("tiene", "tener", "verb"),
)

DICTIONARY = (
    ("abortion", "aborto"),
    ("art", "arte"),
    ("family", "cámara"),
    ("family", "familia"),
    ("friend", "amigo"),
    ("friend", "conocido"),
    ("head", "jefe"),
    ("head", "responsable"),
    ("issue", "asunto"),
    ("issue", "emisión"),
    ("issue", "número"),
    ("issue", "tema"),
    ("mine", "mina"),
    ("number", "cantidad"),
    ("number", "cifra"),
    ("number", "número"),
    ("old", "edad"),
    ("old", "viejo"),
    ("study", "estudio"),
    ("voter", "elector"),
    ("voter", "votante"),
    ("year", "año"),
)

_NUMBER_PARTNERS = (
    "amount",
    "numeral",
    "act",
    "routine",
    "telephone_number",
    "bit",
    "turn",
    "count",
    "total",
    "grammatical_number",
    "identification_number",
)

# English synsets; a lemma's senses are numbered in the order listed.
SRC_SYNSETS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("abortion.n.01", ("abortion",)),
    ("issue.n.01", ("issue", "topic", "subject")),
    ("issue.n.02", ("issue", "edition")),
    ("issue.n.03", ("issue", "offspring")),
    ("head.n.01", ("head",)),
    ("head.n.02", ("head", "caput")),
    ("head.n.03", ("head",)),
    ("head.n.04", ("head", "chief", "top_dog")),
    ("head.n.05", ("head",)),
    ("head.n.06", ("head",)),
    ("culprit.n.01", ("culprit", "perpetrator")),
    ("family.n.01", ("family",)),
    ("family.n.02", ("family", "household")),
    ("family.n.03", ("family",)),
    ("camera.n.01", ("camera",)),
    ("chamber.n.01", ("chamber", "hall")),
    ("year.n.01", ("year", "twelvemonth")),
    ("year.n.02", ("year",)),
    ("year.n.03", ("year",)),
    ("year.n.04", ("year",)),
    ("age.n.01", ("age",)),
    ("friend.n.01", ("friend",)),
    ("friend.n.02", ("friend", "acquaintance")),
    ("friend.n.03", ("friend",)),
    ("mine.n.01", ("mine",)),
    ("art%1:04:00::", ("art",)),
    ("art%1:06:00::", ("art",)),
    ("art%1:09:00::", ("art", "artistry")),
    ("art%1:10:00::", ("art",)),
    ("study.n.01", ("study", "survey")),
    ("study.n.02", ("study",)),
    ("study.n.03", ("study",)),
    ("studio.n.01", ("studio",)),
    *(
        (f"number.n.{index:02d}", ("number", partner))
        for index, partner in enumerate(_NUMBER_PARTNERS, start=1)
    ),
    ("figure.n.01", ("figure",)),
    ("quantity.n.01", ("quantity",)),
    ("voter.n.01", ("voter", "elector")),
    ("country.n.01", ("country", "state")),
    ("committee.n.01", ("committee", "commission")),
)

_SENSE_KEYS = {
    ("head.n.04", "head"): "head%1:18:00::",
    ("number.n.02", "number"): "number%1:23:00::",
}

# Spanish synsets and the English synset each corresponds to in the interlingual index.
TGT_SYNSETS: tuple[tuple[str, tuple[str, ...], str], ...] = (
    ("es.aborto.n.01", ("aborto",), "abortion.n.01"),
    ("es.tema.n.01", ("tema", "asunto"), "issue.n.01"),
    ("es.responsable.n.01", ("autor", "culpable", "perpetrador", "responsable"), "culprit.n.01"),
    ("es.responsable.n.02", ("responsable",), "head.n.04"),
    ("es.cámara.n.01", ("cámara",), "camera.n.01"),
    ("es.cámara.n.02", ("cámara", "sala"), "chamber.n.01"),
    *((f"es.año.n.{index:02d}", ("año",), f"year.n.{index:02d}") for index in range(1, 5)),
    ("es.edad.n.01", ("edad",), "age.n.01"),
    ("es.conocido.n.01", ("conocido",), "friend.n.02"),
    ("es.mina.n.01", ("mina",), "mine.n.01"),
    *(
        (f"arte%1:{lexfile}:00::", ("arte",), f"art%1:{lexfile}:00::")
        for lexfile in ("04", "06", "09", "10")
    ),
    ("es.estudio.n.01", ("estudio",), "study.n.01"),
    ("es.estudio.n.02", ("estudio", "taller"), "studio.n.01"),
    *((f"es.número.n.{index:02d}", ("número",), f"number.n.{index:02d}") for index in range(1, 6)),
    ("es.cifra.n.01", ("cifra",), "number.n.02"),
    ("es.cifra.n.02", ("cifra",), "number.n.06"),
    ("es.cifra.n.03", ("cifra",), "figure.n.01"),
    ("es.cantidad.n.01", ("cantidad",), "number.n.07"),
    ("es.cantidad.n.02", ("cantidad",), "number.n.08"),
    ("es.cantidad.n.03", ("cantidad",), "quantity.n.01"),
    ("es.votante.n.01", ("votante", "elector"), "voter.n.01"),
)

# Missing from the release-to-release mapping.
LOST_SYNSETS = frozenset({"art%1:09:00::"})

FILLER_NOUNS = (
    ("market", "mercado"),
    ("trade", "comercio"),
    ("price", "precio"),
    ("oil", "petróleo"),
    ("city", "ciudad"),
    ("council", "consejo"),
    ("water", "agua"),
    ("tax", "impuesto"),
    ("court", "tribunal"),
    ("union", "sindicato"),
    ("bank", "banco"),
    ("police", "policía"),
)

# (surface, attributes) per token; `None` closes the sentence with punctuation.
_Word = tuple[str, dict[str, str]]


def _done(surface: str, lemma: str, pos: str, wnsn: int | None = None) -> _Word:
    attributes = {"cmd": "done", "pos": pos, "lemma": lemma}
    if wnsn is not None:
        attributes["wnsn"] = str(wnsn)
    return surface, attributes


def _ignore(surface: str, pos: str) -> _Word:
    return surface, {"cmd": "ignore", "pos": pos}


SEMCOR_SENTENCES: tuple[tuple[_Word, ...], ...] = (
    (
        _ignore("The", "DT"),
        _done("head", "head", "NN", 4),
        _ignore("of", "IN"),
        _ignore("the", "DT"),
        _done("family", "family", "NN", 1),
        _done("spoke", "speak", "VB", 1),
    ),
    (
        _ignore("The", "DT"),
        _done("number", "number", "NN", 2),
        _ignore("of", "IN"),
        _done("voters", "voter", "NNS", 1),
        _done("grew", "grow", "VB", 1),
    ),
    (
        _ignore("He", "PRP"),
        _done("was", "be", "VB", 1),
        _done("ten", "ten", "CD", 1),
        _done("years", "year", "NNS", 1),
        _done("old", "old", "JJ", 1),
    ),
    (
        _ignore("A", "DT"),
        _done("friend", "friend", "NN", 1),
        _ignore("of", "IN"),
        _ignore("mine", "PRP"),
        _done("came", "come", "VB", 1),
    ),
    (
        _done("Art", "art", "NN", 3),
        _done("studies", "study", "NNS", 1),
        _done("flourished", "flourish", "VB", 1),
    ),
    (
        _ignore("The", "DT"),
        _done("abortion", "abortion", "NN", 1),
        _done("issue", "issue", "NN", 1),
        _done("divided", "divide", "VB", 1),
        _ignore("the", "DT"),
        _done("country", "country", "NN", 1),
    ),
    (
        _ignore("The", "DT"),
        _done("committee", "committee", "NN", 1),
        _done("met", "meet", "VB", 1),
    ),
)


def sense_order(rows: tuple[tuple[str, tuple[str, ...]], ...]) -> dict[str, list[str]]:
    senses: dict[str, list[str]] = {}
    for synset, lemmas in rows:
        for lemma in lemmas:
            senses.setdefault(lemma, []).append(synset)
    return senses


def sense_key(synset: str, lemma: str, number: int) -> str:
    if (synset, lemma) in _SENSE_KEYS:
        return _SENSE_KEYS[synset, lemma]
    if synset.startswith(f"{lemma}%"):
        return synset
    return f"{lemma}%1:{number:02d}:00::"


def _write_lines(path: Path, lines: list[str]) -> None:
    with open_text(path, "w") as f:
        for line in lines:
            f.write(f"{line}\n")


_FillerPhrase = tuple[tuple[str, str], tuple[str, str], int, int]


def _filler(
    rng: random.Random, filler_phrases: int
) -> tuple[list[_FillerPhrase], dict[str, int]]:
    """Draw filler phrases with their corpus counts, and a sense count per English noun."""
    pairs = [(a, b) for a in FILLER_NOUNS for b in FILLER_NOUNS if a != b]
    chosen = rng.sample(pairs, min(filler_phrases, len(pairs)))
    phrases = [(a, b, rng.randint(1, 6), rng.randint(0, 6)) for a, b in chosen]
    used = sorted({noun for a, b in chosen for noun, _ in (a, b)})
    senses = {noun: rng.randint(1, 3) for noun in used}
    return phrases, senses


def _semcor_xml(
    sentences: list[tuple[str, tuple[_Word, ...]]], src_senses: dict[str, list[str]]
) -> bytes:
    root = ET.Element("contextfile", {"concord": "fixture"})
    contexts: dict[str, ET.Element] = {}
    for number, (doc_id, words) in enumerate(sentences, start=1):
        if doc_id not in contexts:
            contexts[doc_id] = ET.SubElement(root, "context", {"filename": doc_id, "paras": "yes"})
            ET.SubElement(contexts[doc_id], "p", {"pnum": "1"})
        paragraph = contexts[doc_id].find("p")
        sentence = ET.SubElement(paragraph, "s", {"snum": str(number)})
        for surface, attributes in words:
            attributes = dict(attributes)
            lemma, wnsn = attributes.get("lemma"), attributes.get("wnsn")
            if lemma and wnsn and lemma in src_senses:
                synset = src_senses[lemma][int(wnsn) - 1]
                attributes["lexsn"] = sense_key(synset, lemma, int(wnsn)).partition("%")[2]
            word = ET.SubElement(sentence, "wf", dict(sorted(attributes.items())))
            word.text = surface
        ET.SubElement(sentence, "punc").text = "."
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True) + b"\n"


def generate_fixture(
    output_dir: Path,
    seed: int = DEFAULT_SEED,
    filler_phrases: int = DEFAULT_FILLER_PHRASES,
    filler_sentences: int = DEFAULT_FILLER_SENTENCES,
) -> Path:
    """Write the fixture files into `output_dir` and return the path of its pipeline config."""
    rng = random.Random(seed)
    output_dir.mkdir(parents=True, exist_ok=True)

    phrases, filler_senses = _filler(rng, filler_phrases)

    src_lines = [line for line, repeat in SRC_LINES for _ in range(repeat)]
    tgt_lines = [line for line, repeat in TGT_LINES for _ in range(repeat)]
    for (en_a, es_a), (en_b, es_b), src_count, tgt_count in phrases:
        src_lines += [f"The {en_a} {en_b} changed ."] * src_count
        tgt_lines += [f"El {es_b} de {es_a} cambió ."] * tgt_count
    rng.shuffle(src_lines)
    rng.shuffle(tgt_lines)
    _write_lines(output_dir / "en.txt", src_lines)
    _write_lines(output_dir / "es.txt", tgt_lines)

    nouns = [pair for pair in FILLER_NOUNS if pair[0] in filler_senses]
    src_lexicon = [*SRC_LEXICON, *((en, en, "noun") for en, _ in nouns)]
    tgt_lexicon = [*TGT_LEXICON, *((es, es, "noun") for _, es in nouns)]
    _write_lines(output_dir / "en.lex", ["\t".join(entry) for entry in src_lexicon])
    _write_lines(output_dir / "es.lex", ["\t".join(entry) for entry in tgt_lexicon])
    _write_lines(
        output_dir / "en-es.dict", [f"{en}\t{es}" for en, es in sorted([*DICTIONARY, *nouns])]
    )

    src_synsets = list(SRC_SYNSETS)
    tgt_synsets = list(TGT_SYNSETS)
    for en, es in nouns:
        for index in range(1, filler_senses[en] + 1):
            src_synsets.append((f"{en}.n.{index:02d}", (en,)))
            tgt_synsets.append((f"es.{es}.n.{index:02d}", (es,), f"{en}.n.{index:02d}"))

    src_senses = sense_order(tuple(src_synsets))
    _write_lines(
        output_dir / "en.syn", [f"{synset}\t{','.join(lemmas)}" for synset, lemmas in src_synsets]
    )
    _write_lines(
        output_dir / "en.idx",
        [
            f"{lemma}\t{synset}\t{number}\t{sense_key(synset, lemma, number)}"
            for lemma, synsets in sorted(src_senses.items())
            for number, synset in enumerate(synsets, start=1)
        ],
    )
    _write_lines(
        output_dir / "es.syn",
        [f"{synset}\t{','.join(lemmas)}" for synset, lemmas, _ in tgt_synsets],
    )

    _write_lines(
        output_dir / "es-ili.map",
        sorted(f"{synset}\twn15:{image}" for synset, _, image in tgt_synsets),
    )
    _write_lines(
        output_dir / "wn15-wn16.map",
        sorted(
            f"wn15:{synset}\twn16:{synset}"
            for synset, _ in src_synsets
            if synset not in LOST_SYNSETS
        ),
    )
    _write_lines(
        output_dir / "wn16-wn17.map",
        sorted(f"wn16:{synset}\t{synset}" for synset, _ in src_synsets),
    )

    sentences = [("br-fixture", words) for words in SEMCOR_SENTENCES]
    for _ in range(filler_sentences if phrases else 0):
        (en_a, _), (en_b, _), _, _ = rng.choice(phrases)
        sentences.append(
            (
                "br-filler",
                (
                    _ignore("The", "DT"),
                    _done(en_a, en_a, "NN", rng.randint(1, filler_senses[en_a])),
                    _done(en_b, en_b, "NN", rng.randint(1, filler_senses[en_b])),
                    _done("changed", "change", "VB", 1),
                ),
            )
        )
    (output_dir / "semcor.xml").write_bytes(_semcor_xml(sentences, src_senses))

    config_path = output_dir / "pipeline.toml"
    config = {
        "src-corpus": "en.txt",
        "tgt-corpus": "es.txt",
        "src-lexicon": "en.lex",
        "tgt-lexicon": "es.lex",
        "dict": "en-es.dict",
        "src-inventory": "en.syn",
        "src-index": "en.idx",
        "tgt-inventory": "es.syn",
        "map": ["es-ili.map", "wn15-wn16.map", "wn16-wn17.map"],
        "corpus": "semcor.xml",
        "output-dir": "out",
        "threshold": 1,
        "seed": seed,
    }
    with config_path.open("wb") as f:
        tomli_w.dump(config, f)

    logger.info(
        "Wrote fixture with %d filler phrases and %d extra sentences to %s",
        len(phrases),
        len(sentences) - len(SEMCOR_SENTENCES),
        output_dir,
    )
    return config_path
