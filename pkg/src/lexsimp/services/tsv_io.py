# Shared-task TSV codecs
# Gold files, run files and unlabeled datasets

import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import BinaryIO

from pydantic import ValidationError

from ..errors import SpanResolutionError, TsvParseError
from ..models.instance import (
    MAX_SUBSTITUTES,
    GoldInstance,
    Instance,
    PredictionRecord,
    locate_target_span,
    normalize,
)

logger = logging.getLogger(__name__)


@dataclass
class ParseReport:
    """Counters collected while parsing a run file."""

    lines: int = 0
    truncated_lines: int = 0
    duplicates_removed: int = 0


def _lines(stream: BinaryIO) -> Iterator[tuple[int, str]]:
    try:
        text = stream.read().decode("utf-8")
    except UnicodeDecodeError as e:
        raise TsvParseError(f"input is not valid UTF-8: {e}") from e
    for line_no, line in enumerate(text.split("\n"), start=1):
        if line.endswith("\r"):
            line = line[:-1]
        if line:
            yield line_no, line


def _instance(context: str, target: str, line_no: int) -> Instance:
    try:
        span = locate_target_span(context, target)
    except SpanResolutionError as e:
        raise SpanResolutionError(str(e), line_no=line_no) from e
    try:
        return Instance(context=context, target=target, target_span=span)
    except ValidationError as e:
        raise TsvParseError(str(e.errors()[0]["msg"]), line_no=line_no) from e


def parse_gold_tsv(stream: BinaryIO) -> list[GoldInstance]:
    """Parse `context TAB target TAB ann1 TAB ann2 ...` records."""
    golds: list[GoldInstance] = []
    for line_no, line in _lines(stream):
        fields = line.split("\t")
        if len(fields) < 3:
            raise TsvParseError(
                f"expected at least 3 tab-separated fields, got {len(fields)}",
                line_no=line_no,
            )
        context, target, *annotations = fields
        kept = [a for a in annotations if normalize(a)]
        if len(kept) != len(annotations):
            logger.warning(
                "line %d: dropped %d empty annotation(s)",
                line_no,
                len(annotations) - len(kept),
            )
        if not kept:
            raise TsvParseError("no non-empty annotations", line_no=line_no)
        golds.append(
            GoldInstance(
                instance=_instance(context, target, line_no),
                annotations=kept,
                line_no=line_no,
            )
        )
    return golds


def parse_dataset_tsv(stream: BinaryIO) -> list[Instance]:
    """Parse unlabeled `context TAB target` records; extra columns are ignored."""
    instances: list[Instance] = []
    for line_no, line in _lines(stream):
        fields = line.split("\t")
        if len(fields) < 2:
            raise TsvParseError(
                f"expected at least 2 tab-separated fields, got {len(fields)}",
                line_no=line_no,
            )
        instances.append(_instance(fields[0], fields[1], line_no))
    return instances


def parse_run_tsv(
    stream: BinaryIO, report: ParseReport | None = None
) -> list[PredictionRecord]:
    """Parse `context TAB target TAB sub1 ... subN` records."""
    report = report if report is not None else ParseReport()
    records: list[PredictionRecord] = []
    for line_no, line in _lines(stream):
        fields = line.split("\t")
        if len(fields) < 2:
            raise TsvParseError(
                f"expected at least 2 tab-separated fields, got {len(fields)}",
                line_no=line_no,
            )
        context, target, *raw = fields
        seen: set[str] = set()
        substitutes: list[str] = []
        for sub in raw:
            key = normalize(sub)
            if not key:
                continue
            if key in seen:
                report.duplicates_removed += 1
                continue
            seen.add(key)
            substitutes.append(sub)
        if len(substitutes) > MAX_SUBSTITUTES:
            report.truncated_lines += 1
            logger.warning(
                "line %d: %d substitutes, keeping the first %d",
                line_no,
                len(substitutes),
                MAX_SUBSTITUTES,
            )
            substitutes = substitutes[:MAX_SUBSTITUTES]
        report.lines += 1
        records.append(
            PredictionRecord(context=context, target=target, substitutes=substitutes)
        )
    return records


def format_run_line(record: PredictionRecord) -> str:
    return "\t".join([record.context, record.target, *record.substitutes]) + "\n"


def write_run_tsv(records: Iterable[PredictionRecord], sink: BinaryIO) -> None:
    """Write records as byte-exact run TSV."""
    for record in records:
        sink.write(format_run_line(record).encode("utf-8"))


def format_gold_line(gold: GoldInstance) -> str:
    """Serialize a gold record the way the shared-task files lay it out."""
    instance = gold.instance
    return "\t".join([instance.context, instance.target, *gold.annotations]) + "\n"


def write_gold_tsv(golds: Iterable[GoldInstance], sink: BinaryIO) -> None:
    for gold in golds:
        sink.write(format_gold_line(gold).encode("utf-8"))


def gold_top1_set(gold: GoldInstance) -> set[str]:
    """The most frequently suggested substitute(s); ties keep every one."""
    counts = gold.vote_counts
    best = max(counts.values())
    return {text for text, count in counts.items() if count == best}
