"""
Shared-task TSV codec tests: gold files, run files and datasets.
"""

import io
import random

import pytest

from lexsimp.errors import SpanResolutionError, TsvParseError
from lexsimp.models.instance import PredictionRecord, locate_target_span, normalize
from lexsimp.services.tsv_io import (
    ParseReport,
    format_gold_line,
    gold_top1_set,
    parse_dataset_tsv,
    parse_gold_tsv,
    parse_run_tsv,
    write_gold_tsv,
    write_run_tsv,
)


def stream(text: str) -> io.BytesIO:
    return io.BytesIO(text.encode("utf-8"))


WORDS = ["rise", "go up", "Climb", "soar", "café", "naïve", "well-known", "ΟΔΟΣ"]


def random_record(rng: random.Random) -> PredictionRecord:
    """A record whose fields survive TSV unchanged."""
    letters = "abcdefghijklmnopqrstuvwxyzéüß"
    context = " ".join(
        "".join(rng.choice(letters) for _ in range(rng.randint(1, 8)))
        for _ in range(rng.randint(1, 10))
    ).capitalize()
    target = "".join(rng.choice(letters) for _ in range(rng.randint(1, 10)))
    substitutes: list[str] = []
    for _ in range(rng.randint(0, 10)):
        if rng.random() < 0.3:
            word = rng.choice(WORDS)
        else:
            word = "".join(rng.choice(letters) for _ in range(rng.randint(1, 12)))
        if normalize(word) not in {normalize(s) for s in substitutes}:
            substitutes.append(word)
    return PredictionRecord(context=context, target=target, substitutes=substitutes)


class TestSpanResolution:
    """Targets are located as whole tokens, ignoring case"""

    def test_skips_matches_inside_words(self):
        assert locate_target_span("concatenate cat", "cat") == (12, 15)

    def test_case_insensitive(self):
        assert locate_target_span("Cat naps.", "cat") == (0, 3)

    def test_multiword_target(self):
        assert locate_target_span("Prices go up fast.", "go up") == (7, 12)

    def test_missing_target(self):
        with pytest.raises(SpanResolutionError):
            locate_target_span("The dog sat.", "cat")


class TestGoldParsing:
    def test_votes_and_top1(self):
        golds = parse_gold_tsv(stream("The cat sat.\tcat\tfeline\tkitty\tfeline\n"))

        assert len(golds) == 1
        gold = golds[0]
        assert gold.instance.target_span == (4, 7)
        assert gold.annotations == ["feline", "kitty", "feline"]
        assert gold.vote_counts["feline"] == 2
        assert gold_top1_set(gold) == {"feline"}

    def test_top1_ties_keep_every_annotation(self):
        gold = parse_gold_tsv(stream("The cat sat.\tcat\tpet\tkitty\n"))[0]
        assert gold_top1_set(gold) == {"pet", "kitty"}

    def test_empty_annotations_dropped(self):
        gold = parse_gold_tsv(stream("The cat sat.\tcat\t\tkitty\n"))[0]
        assert gold.annotations == ["kitty"]

    def test_no_annotations_is_an_error(self):
        with pytest.raises(TsvParseError) as exc_info:
            parse_gold_tsv(stream("The cat sat.\tcat\t \n"))
        assert exc_info.value.line_no == 1

    def test_too_few_fields_reports_line(self):
        with pytest.raises(TsvParseError) as exc_info:
            parse_gold_tsv(stream("The cat sat.\tcat\tpet\nno tabs here\n"))
        assert exc_info.value.line_no == 2

    def test_unresolvable_target_reports_line(self):
        with pytest.raises(SpanResolutionError) as exc_info:
            parse_gold_tsv(stream("The cat sat.\tdog\tpuppy\n"))
        assert exc_info.value.line_no == 1

    def test_invalid_utf8(self):
        with pytest.raises(TsvParseError):
            parse_gold_tsv(io.BytesIO(b"The caf\xe9 sat.\tcaf\tx\n"))


class TestDatasetParsing:
    def test_crlf_and_blank_lines(self):
        instances = parse_dataset_tsv(
            stream("The cat sat.\tcat\r\n\nA dog ran.\tdog\textra\n")
        )

        assert [i.target for i in instances] == ["cat", "dog"]
        assert instances[0].surface == "cat"

    def test_empty_file(self):
        assert parse_dataset_tsv(stream("")) == []


class TestRunFiles:
    def test_duplicates_removed_keeping_first(self):
        report = ParseReport()
        records = parse_run_tsv(stream("A b\tb\tx\ty\tX\n"), report)

        assert records[0].substitutes == ["x", "y"]
        assert report.duplicates_removed == 1

    def test_truncated_to_ten(self):
        subs = "\t".join(f"w{i}" for i in range(12))
        report = ParseReport()
        records = parse_run_tsv(stream(f"A b\tb\t{subs}\n"), report)

        assert records[0].substitutes == [f"w{i}" for i in range(10)]
        assert report.truncated_lines == 1

    def test_record_without_substitutes(self):
        records = parse_run_tsv(stream("A b\tb\n"))
        assert records[0].substitutes == []

    def test_write_is_byte_exact(self):
        sink = io.BytesIO()
        write_run_tsv(
            [
                PredictionRecord(context="A b", target="b", substitutes=["x", "y"]),
                PredictionRecord(context="C d", target="d"),
            ],
            sink,
        )
        assert sink.getvalue() == b"A b\tb\tx\ty\nC d\td\n"

    def test_written_file_parses_back(self, fixtures_dir):
        with open(fixtures_dir / "run.tsv", "rb") as f:
            records = parse_run_tsv(f)
        sink = io.BytesIO()
        write_run_tsv(records, sink)
        assert sink.getvalue() == (fixtures_dir / "run.tsv").read_bytes()

    def test_random_records_round_trip(self):
        rng = random.Random(20220907)
        records = [random_record(rng) for _ in range(200)]

        sink = io.BytesIO()
        write_run_tsv(records, sink)
        report = ParseReport()
        parsed = parse_run_tsv(io.BytesIO(sink.getvalue()), report)

        assert parsed == records
        assert report.lines == 200
        assert report.duplicates_removed == report.truncated_lines == 0


class TestGoldSerialization:
    def test_fixture_lines_reproduced(self, fixtures_dir):
        raw = (fixtures_dir / "gold.tsv").read_bytes()
        golds = parse_gold_tsv(io.BytesIO(raw))

        lines = raw.decode("utf-8").splitlines(keepends=True)
        assert [format_gold_line(g) for g in golds] == lines

        sink = io.BytesIO()
        write_gold_tsv(golds, sink)
        assert sink.getvalue() == raw

    def test_random_lines_reproduced(self):
        rng = random.Random(373)
        for _ in range(100):
            record = random_record(rng)
            context = f"{record.context} {record.target}."
            annotations = [rng.choice(WORDS) for _ in range(rng.randint(1, 12))]
            line = "\t".join([context, record.target, *annotations]) + "\n"

            gold = parse_gold_tsv(stream(line))[0]

            assert format_gold_line(gold) == line


class TestNormalization:
    def test_trims_ascii_whitespace_and_folds_case(self):
        assert normalize("  Rise\t") == "rise"

    def test_unicode_case_folding(self):
        assert normalize("ΟΔΟΣ") == normalize("οδοσ") == normalize("οδος")
        assert normalize("Ünterschied") == "ünterschied"
