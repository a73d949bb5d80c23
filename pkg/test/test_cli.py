from __future__ import annotations

import json
from pathlib import Path

import pytest
from conftest import FIXTURES_DIR, GOLDEN_DIR

from phrasesense import __version__
from phrasesense.cli import main
from phrasesense.evaluation import EvalReport
from phrasesense.pipeline import PipelineConfig

HAND_FIXTURE = FIXTURES_DIR / "enriched.xml"


@pytest.mark.parametrize("argv", [["--help"], ["--version"], ["sweep", "--help"]])
def test_help_and_version(argv: list[str], capsys: pytest.CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 0
    out = capsys.readouterr().out
    assert "phrasesense" in out
    if argv == ["--version"]:
        assert out.strip() == f"phrasesense {__version__}"


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["chunk", "--bogus"],
        ["evaluate", "--threshold", "-1"],
        ["evaluate", "--threshold", "many"],
        ["sweep", "--thresholds", "3,1"],
    ],
)
def test_usage_errors(argv: list[str], capsys: pytest.CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 1
    assert "error:" in capsys.readouterr().err


def test_missing_command(capsys: pytest.CaptureFixture[str]) -> None:
    assert main([]) == 1
    assert "usage:" in capsys.readouterr().err


def test_conflicting_formats(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["evaluate", "--corpus", str(HAND_FIXTURE), "--json", "--tsv"]) == 1
    assert "error: --json and --tsv cannot be combined" in capsys.readouterr().err


def test_missing_required_option(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["chunk", "--lexicon", "en.lex"]) == 1
    assert "`chunk` requires --input, --output" in capsys.readouterr().err


def test_missing_input_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["evaluate", "--corpus", str(tmp_path / "missing.xml")]
    assert main(argv) == 2
    assert "error: corpus not found" in capsys.readouterr().err


def test_malformed_corpus(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    corpus = tmp_path / "semcor.xml"
    corpus.write_text("<contextfile><s></contextfile>", encoding="utf-8")
    assert main(["evaluate", "--corpus", str(corpus)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_chunk_and_align(fixture_config: PipelineConfig, tmp_path: Path) -> None:
    for language, corpus, lexicon in (
        ("src", fixture_config.src_corpus, fixture_config.src_lexicon),
        ("tgt", fixture_config.tgt_corpus, fixture_config.tgt_lexicon),
    ):
        output = tmp_path / f"{language}-phrases.tsv"
        argv = ["chunk", "--lexicon", str(lexicon), "--input", str(corpus), "--output", str(output)]
        assert main(argv) == 0
        assert output.read_bytes() == (GOLDEN_DIR / output.name).read_bytes()

    output = tmp_path / "alignments.tsv"
    argv = [
        "align",
        "--dict",
        str(fixture_config.dictionary),
        "--src",
        str(tmp_path / "src-phrases.tsv"),
        "--tgt",
        str(tmp_path / "tgt-phrases.tsv"),
        "--output",
        str(output),
    ]
    assert main(argv) == 0
    assert output.read_bytes() == (GOLDEN_DIR / "alignments.tsv").read_bytes()


def test_match(fixture_config: PipelineConfig, capsys: pytest.CaptureFixture[str]) -> None:
    argv = [
        "match",
        "--forest",
        str(GOLDEN_DIR / "src-phrases.tsv"),
        "--lexicon",
        str(fixture_config.src_lexicon),
        "--input",
        str(fixture_config.src_corpus),
    ]
    assert main(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 31
    starts = []
    for line in lines:
        start, end, key = line.split("\t")
        assert int(end) - int(start) == len(key.split())
        starts.append(int(start))
    assert starts == sorted(starts)


def test_annotate(
    fixture_config: PipelineConfig, fixture_run: tuple[EvalReport, Path], tmp_path: Path
) -> None:
    output = tmp_path / "enriched.xml"
    argv = [
        "annotate",
        "--corpus",
        str(fixture_config.corpus),
        "--alignments",
        str(GOLDEN_DIR / "alignments.tsv"),
        "--lexicon",
        str(fixture_config.src_lexicon),
        "--src-inventory",
        str(fixture_config.src_inventory),
        "--src-index",
        str(fixture_config.src_index),
        "--tgt-inventory",
        str(fixture_config.tgt_inventory),
        *(option for path in fixture_config.mappings for option in ("--map", str(path))),
        "--output",
        str(output),
    ]
    assert main(argv) == 0
    _, output_dir = fixture_run
    assert output.read_bytes() == (output_dir / "enriched.xml").read_bytes()


def test_evaluate(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["evaluate", "--corpus", str(HAND_FIXTURE)]) == 0
    assert capsys.readouterr().out == (
        "Threshold: 1\n"
        "Amenable words: 12\n"
        "Phrase words: 9 (75.00%)\n"
        "Covered words: 7 (58.33%)\n"
        "Retained words: 5\n"
        "Potential precision: 71.43%\n"
    )
    assert main(["evaluate", "--corpus", str(HAND_FIXTURE), "--threshold", "6", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["covered_words"] == 3
    assert report["potential_precision"] == 0.0


def test_sweep(tmp_path: Path) -> None:
    output = tmp_path / "sweep.tsv"
    plot = tmp_path / "sweep.png"
    argv = ["sweep", "--corpus", str(HAND_FIXTURE), "--output", str(output), "--plot", str(plot)]
    assert main(argv) == 0
    lines = output.read_text(encoding="utf-8").splitlines()
    assert [line.split("\t")[0] for line in lines[1:]] == ["0", "1", "2", "3", "4", "6", "9"]
    assert plot.stat().st_size > 0

    argv = ["sweep", "--corpus", str(HAND_FIXTURE), "--output", str(output), "--thresholds", "1,10"]
    assert main(argv) == 0
    assert output.read_text(encoding="utf-8").splitlines()[1:] == [
        "1\t58.33\t7\t71.43\t5",
        "10\t0.00\t0\t-\t0",
    ]


def test_invert(tmp_path: Path) -> None:
    mapping = tmp_path / "wn15-wn16.map"
    mapping.write_text("wn15:a.n.01\twn16:a.n.02\nwn15:b.n.01\twn16:b.n.01\n", encoding="utf-8")
    output = tmp_path / "wn16-wn15.map"
    assert main(["invert", "--map", str(mapping), "--output", str(output)]) == 0
    assert output.read_text(encoding="utf-8") == (
        "wn16:a.n.02\twn15:a.n.01\nwn16:b.n.01\twn15:b.n.01\n"
    )


def test_fixture_and_pipeline(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    argv = [
        "fixture",
        "--output-dir",
        str(tmp_path / "fixture"),
        "--filler-phrases",
        "0",
        "--filler-sentences",
        "0",
    ]
    assert main(argv) == 0
    config_path = Path(capsys.readouterr().out.strip())
    assert config_path == tmp_path / "fixture" / "pipeline.toml"

    output_dir = tmp_path / "out"
    assert main(["pipeline", "--config", str(config_path), "--output-dir", str(output_dir)]) == 0
    assert capsys.readouterr().out == (GOLDEN_DIR / "report.txt").read_text(encoding="utf-8")
    for name in ("alignments.tsv", "sweep.tsv", "report.json"):
        assert (output_dir / name).read_bytes() == (GOLDEN_DIR / name).read_bytes()
    assert not (tmp_path / "fixture" / "out").exists()


def test_config_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    config = tmp_path / "evaluate.toml"
    config.write_text(f'corpus = "{HAND_FIXTURE}"\nthreshold = 4\njson = true\n', encoding="utf-8")
    assert main(["evaluate", "--config", str(config)]) == 0
    assert json.loads(capsys.readouterr().out)["threshold"] == 4

    # Flags win over the config file.
    assert main(["evaluate", "--config", str(config), "--threshold", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["threshold"] == 1

    for setting in ("colour", "config"):
        config.write_text(f"{setting} = true\n", encoding="utf-8")
        assert main(["evaluate", "--config", str(config)]) == 1
        assert f"unknown setting `{setting}`" in capsys.readouterr().err

    config.write_text(f'corpus = "{HAND_FIXTURE}"\nverbose = true\n', encoding="utf-8")
    assert main(["evaluate", "--config", str(config)]) == 0


def test_pipeline_missing_dictionary(
    fixture_config: PipelineConfig, tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    config_path = fixture_config.output_dir.parent / "pipeline.toml"
    argv = [
        "pipeline",
        "--config",
        str(config_path),
        "--dict",
        str(tmp_path / "missing.dict"),
        "--output-dir",
        str(tmp_path / "out"),
    ]
    assert main(argv) == 2
    assert "error: align: dictionary not found" in capsys.readouterr().err


def test_undecodable_inputs(
    fixture_config: PipelineConfig, tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    output = str(tmp_path / "phrases.tsv")
    lexicon = tmp_path / "en.lex"
    lexicon.write_bytes(b"caf\xe9\tcafe\tnoun\n")
    argv = ["chunk", "--lexicon", str(lexicon), "--input", str(fixture_config.src_corpus)]
    assert main([*argv, "--output", output]) == 2
    assert f"error: {lexicon}: not valid UTF-8" in capsys.readouterr().err

    corpus = tmp_path / "en.txt"
    corpus.write_bytes(b"The caf\xe9 was open .\n")
    argv = ["chunk", "--lexicon", str(fixture_config.src_lexicon), "--input", str(corpus)]
    assert main([*argv, "--output", output]) == 2
    assert "not valid UTF-8" in capsys.readouterr().err

    config = tmp_path / "chunk.toml"
    config.write_bytes(b'input = "caf\xe9.txt"\n')
    assert main(["chunk", "--config", str(config)]) == 2
    assert "not valid UTF-8" in capsys.readouterr().err

    semcor = tmp_path / "semcor.xml"
    semcor.write_bytes(b"<contextfile><s><wf>caf\xe9</wf></s></contextfile>")
    assert main(["evaluate", "--corpus", str(semcor)]) == 2


def test_unwritable_output(
    fixture_config: PipelineConfig, tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    argv = [
        "chunk",
        "--lexicon",
        str(fixture_config.src_lexicon),
        "--input",
        str(fixture_config.src_corpus),
        "--output",
        str(tmp_path),
    ]
    assert main(argv) == 2
    assert f"error: {tmp_path}: " in capsys.readouterr().err


def test_stages_reproduce_the_pipeline(
    fixture_run: tuple[EvalReport, Path], tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    _, output_dir = fixture_run
    enriched = output_dir / "enriched.xml"
    assert enriched.read_bytes() == (GOLDEN_DIR / "enriched.xml").read_bytes()

    assert main(["evaluate", "--corpus", str(enriched), "--json"]) == 0
    assert capsys.readouterr().out == (GOLDEN_DIR / "report.json").read_text(encoding="utf-8")

    output = tmp_path / "sweep.tsv"
    assert main(["sweep", "--corpus", str(enriched), "--output", str(output)]) == 0
    assert output.read_bytes() == (GOLDEN_DIR / "sweep.tsv").read_bytes()
