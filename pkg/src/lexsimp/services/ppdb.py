# Paraphrase database
# Loads lexical PPDB dumps and answers paraphrase queries by source word

import gzip
import io
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO

from pydantic import ValidationError

from ..errors import ResourceLoadError
from ..models.candidate import Candidate, ModuleId
from ..models.instance import POSCategory, normalize
from ..models.lexicon import ParaphraseEntry

logger = logging.getLogger(__name__)

FIELD_SEPARATOR = " ||| "
QUALITY_FEATURE = "PPDB2.0Score"

# Syntactic tag prefixes accepted for each category.
TAG_PREFIXES: dict[POSCategory, str] = {
    POSCategory.VERB: "[V",
    POSCategory.NOUN: "[N",
    POSCategory.ADJ: "[J",
}

_QUALITY = re.compile(rf"(?:^|\s){re.escape(QUALITY_FEATURE)}=(\S+)")


@dataclass
class PPDBLoadReport:
    lines: int = 0
    entries: int = 0
    skipped: int = 0
    missing_score: int = 0


class ParaphraseIndex:
    """Normalized source word -> entries, best quality first."""

    def __init__(
        self,
        by_source: dict[str, list[ParaphraseEntry]],
        report: PPDBLoadReport | None = None,
    ) -> None:
        self.by_source = by_source
        self.report = report or PPDBLoadReport(
            entries=sum(len(v) for v in by_source.values())
        )

    def __len__(self) -> int:
        return len(self.by_source)

    def __contains__(self, word: object) -> bool:
        return isinstance(word, str) and normalize(word) in self.by_source


def _parse_quality(features: str) -> float | None:
    match = _QUALITY.search(features)
    return float(match.group(1)) if match else None


def load_ppdb(stream: BinaryIO) -> ParaphraseIndex:
    """Index lexical paraphrase records.

    Lines read `LHS ||| source ||| target ||| features ||| alignment ||| entailment`.
    """
    report = PPDBLoadReport()
    best: dict[tuple[str, str], ParaphraseEntry] = {}
    try:
        text = io.TextIOWrapper(stream, encoding="utf-8")
        for line_no, line in enumerate(text, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            report.lines += 1
            fields = line.split(FIELD_SEPARATOR)
            if len(fields) < 6:
                report.skipped += 1
                logger.debug(
                    "PPDB line %d has %d fields, skipped", line_no, len(fields)
                )
                continue
            tag, source, target, features, _alignment, entailment = (
                f.strip() for f in fields[:6]
            )
            try:
                quality = _parse_quality(features)
            except ValueError:
                report.skipped += 1
                continue
            if quality is None:
                report.missing_score += 1
                quality = 0.0
            if normalize(source) == normalize(target):
                report.skipped += 1
                continue
            try:
                entry = ParaphraseEntry(
                    source=source,
                    target=target,
                    syntactic_tag=tag,
                    quality=quality,
                    entailment=entailment,
                )
            except ValidationError:
                report.skipped += 1
                continue
            key = (normalize(source), normalize(target))
            current = best.get(key)
            if current is None or entry.quality > current.quality:
                best[key] = entry
    except UnicodeDecodeError as e:
        raise ResourceLoadError(f"PPDB stream is not valid UTF-8: {e}") from e
    except OSError as e:
        raise ResourceLoadError(f"cannot read PPDB stream: {e}") from e

    by_source: dict[str, list[ParaphraseEntry]] = {}
    for (source, _), entry in best.items():
        by_source.setdefault(source, []).append(entry)
    for entries in by_source.values():
        entries.sort(key=lambda e: (-e.quality, normalize(e.target)))
    report.entries = len(best)

    if report.skipped:
        logger.warning("PPDB: skipped %d malformed line(s)", report.skipped)
    if report.missing_score:
        logger.warning(
            "PPDB: %d line(s) without %s, quality set to 0.0",
            report.missing_score,
            QUALITY_FEATURE,
        )
    logger.info(
        "Loaded PPDB: %d lines, %d entries for %d sources",
        report.lines,
        report.entries,
        len(by_source),
    )
    return ParaphraseIndex(by_source, report)


def open_ppdb(path: str | Path) -> ParaphraseIndex:
    """Load a PPDB dump from disk; `.gz` files are decompressed on the fly."""
    ppdb_path = Path(path)
    try:
        opener = gzip.open if ppdb_path.suffix == ".gz" else open
        with opener(ppdb_path, "rb") as stream:
            return load_ppdb(stream)  # type: ignore[arg-type]
    except ResourceLoadError as e:
        raise ResourceLoadError(str(e), str(ppdb_path)) from e
    except (OSError, EOFError) as e:
        raise ResourceLoadError(str(e), str(ppdb_path)) from e


def paraphrases_for(
    idx: ParaphraseIndex, word: str, pos: POSCategory, limit: int = 15
) -> list[Candidate]:
    """Best `limit` paraphrases of `word` whose tag fits `pos`."""
    prefix = TAG_PREFIXES.get(pos)
    entries = [
        e
        for e in idx.by_source.get(normalize(word), [])
        if prefix is None or e.syntactic_tag.startswith(prefix)
    ]
    return [
        Candidate(
            lemma=normalize(e.target),
            surface=e.target,
            source=ModuleId.PPDB,
            module_score=e.quality,
        )
        for e in entries[:limit]
    ]
