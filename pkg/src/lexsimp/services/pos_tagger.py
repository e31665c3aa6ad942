# Contextual POS tagging of the target word

import logging
import re
from collections.abc import Mapping
from pathlib import Path
from typing import Protocol

from ..config import bundled_path, open_text
from ..errors import ResourceLoadError
from ..models.instance import Instance, POSCategory

logger = logging.getLogger(__name__)

TIE_ORDER = (POSCategory.VERB, POSCategory.NOUN, POSCategory.ADJ, POSCategory.OTHER)

DETERMINERS = frozenset(
    "a an the this that these those my your his her its our their some any "
    "every each no another such".split()
)
VERB_CUES = frozenset(
    "to will would shall should can could may might must i you we they he she "
    "it not never did does do".split()
)

# (suffix, replacement, categories the inflected form can have)
_INFLECTIONS: tuple[tuple[str, str, frozenset[POSCategory]], ...] = (
    ("ies", "y", frozenset({POSCategory.NOUN, POSCategory.VERB})),
    ("es", "", frozenset({POSCategory.NOUN, POSCategory.VERB})),
    ("s", "", frozenset({POSCategory.NOUN, POSCategory.VERB})),
    ("ied", "y", frozenset({POSCategory.VERB})),
    ("ed", "", frozenset({POSCategory.VERB})),
    ("ed", "e", frozenset({POSCategory.VERB})),
    ("d", "", frozenset({POSCategory.VERB})),
    ("ing", "", frozenset({POSCategory.VERB})),
    ("ing", "e", frozenset({POSCategory.VERB})),
    ("ier", "y", frozenset({POSCategory.ADJ})),
    ("er", "", frozenset({POSCategory.ADJ})),
    ("r", "", frozenset({POSCategory.ADJ})),
    ("iest", "y", frozenset({POSCategory.ADJ})),
    ("est", "", frozenset({POSCategory.ADJ})),
    ("st", "", frozenset({POSCategory.ADJ})),
)

_SUFFIX_RULES: tuple[tuple[tuple[str, ...], POSCategory], ...] = (
    (("ly",), POSCategory.OTHER),
    (
        ("tion", "sion", "ness", "ment", "ity", "ism", "ance", "ence", "ship",
         "hood", "dom", "ist", "tude"),
        POSCategory.NOUN,
    ),
    (
        ("ous", "ful", "ive", "able", "ible", "less", "ish", "ic", "ical", "ary",
         "ant", "ent"),
        POSCategory.ADJ,
    ),
    (("ize", "ise", "ify", "ated", "ating"), POSCategory.VERB),
)

_TOKEN = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)?")

# Universal Dependencies and Penn Treebank tags folded onto the coarse set.
_TAG_ALIASES = {"PROPN": POSCategory.NOUN, "AUX": POSCategory.VERB}
_TAG_PREFIXES = (
    ("VB", POSCategory.VERB),
    ("NN", POSCategory.NOUN),
    ("JJ", POSCategory.ADJ),
)


class ContextualPOSTagger(Protocol):
    """Assigns a coarse POS category to a span of a sentence; always total."""

    def tag(self, context: str, target_span: tuple[int, int]) -> POSCategory: ...


def coarse_category(tag: str) -> POSCategory:
    """Coarse category of a lexicon tag; unknown tags count as OTHER."""
    tag = tag.strip().upper()
    if not tag:
        raise ValueError("empty category")
    if tag in POSCategory.__members__:
        return POSCategory(tag)
    if tag in _TAG_ALIASES:
        return _TAG_ALIASES[tag]
    for prefix, category in _TAG_PREFIXES:
        if tag.startswith(prefix):
            return category
    return POSCategory.OTHER


def load_pos_lexicon(
    path: str | Path | None = None,
) -> dict[str, dict[POSCategory, int]]:
    """
    Read `word category [count]` rows into word -> category counts.

    Rows are tab or space separated and the file may be gzipped, so a full
    tagged-corpus dump can replace the bundled seed table.
    """
    lexicon_path = Path(path) if path is not None else bundled_path("pos_lexicon.tsv")
    lexicon: dict[str, dict[POSCategory, int]] = {}
    try:
        with open_text(lexicon_path) as f:
            for line_no, line in enumerate(f, start=1):
                line = line.rstrip()
                if not line or line.startswith("#"):
                    continue
                fields = line.split("\t") if "\t" in line else line.split()
                if len(fields) < 2:
                    raise ResourceLoadError(
                        "expected word and category", str(lexicon_path), line_no
                    )
                try:
                    category = coarse_category(fields[1])
                    count = int(fields[2]) if len(fields) > 2 else 1
                except ValueError as e:
                    raise ResourceLoadError(str(e), str(lexicon_path), line_no) from e
                entry = lexicon.setdefault(fields[0].strip().lower(), {})
                entry[category] = entry.get(category, 0) + count
    except OSError as e:
        raise ResourceLoadError(str(e), str(lexicon_path)) from e
    logger.info("Loaded POS lexicon %s with %d words", lexicon_path, len(lexicon))
    return lexicon


class LexiconPOSTagger:
    """Closed-lexicon tagger with a left-context cue and suffix heuristics."""

    def __init__(self, lexicon: Mapping[str, Mapping[POSCategory, int]]) -> None:
        self.lexicon = lexicon

    @classmethod
    def bundled(cls) -> "LexiconPOSTagger":
        return cls(load_pos_lexicon())

    def tag(self, context: str, target_span: tuple[int, int]) -> POSCategory:
        start, end = target_span
        word = context[start:end].lower()
        counts = self._lookup(word)
        if not counts:
            return self._suffix_guess(word)

        options = dict(counts)
        previous = self._previous_token(context, start)
        if len(options) > 1 and previous in DETERMINERS:
            options.pop(POSCategory.VERB, None)
        elif POSCategory.VERB in options and previous in VERB_CUES:
            return POSCategory.VERB
        return min(
            options,
            key=lambda pos: (-options[pos], TIE_ORDER.index(pos)),
        )

    def _lookup(self, word: str) -> dict[POSCategory, int]:
        if word in self.lexicon:
            return {
                pos: n for pos, n in self.lexicon[word].items() if pos in TIE_ORDER
            }
        if " " in word:
            return self._lookup(word.split()[-1])

        for suffix, replacement, allowed in _INFLECTIONS:
            if not word.endswith(suffix) or len(word) <= len(suffix) + 1:
                continue
            stem = word[: -len(suffix)]
            bases = [stem + replacement]
            if len(stem) > 2 and stem[-1] == stem[-2] and not replacement:
                bases.append(stem[:-1])
            for base in bases:
                entry = self.lexicon.get(base)
                if entry:
                    found = {pos: n for pos, n in entry.items() if pos in allowed}
                    if found:
                        return found
        return {}

    def _suffix_guess(self, word: str) -> POSCategory:
        for suffixes, category in _SUFFIX_RULES:
            if any(word.endswith(s) and len(word) > len(s) + 2 for s in suffixes):
                return category
        return POSCategory.OTHER

    @staticmethod
    def _previous_token(context: str, start: int) -> str | None:
        tokens = _TOKEN.findall(context[:start])
        return tokens[-1].lower() if tokens else None


def tag_target_pos(instance: Instance, tagger: ContextualPOSTagger) -> POSCategory:
    """Category of the instance's target, as assigned by the tagger."""
    return tagger.tag(instance.context, instance.target_span)
