# Inflection engine
# Detects the inflectional form of a surface word and re-inflects lemmas to it

import logging
import re
from collections.abc import Mapping, Set
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path

from ..config import bundled_path
from ..errors import ResourceLoadError
from ..models.instance import POSCategory

logger = logging.getLogger(__name__)

VOWELS = "aeiou"


class InflectionForm(StrEnum):
    BASE = "BASE"
    THIRD_SG = "THIRD_SG"
    PAST = "PAST"
    GERUND = "GERUND"
    PAST_PART = "PAST_PART"
    SINGULAR = "SINGULAR"
    PLURAL = "PLURAL"
    POSITIVE = "POSITIVE"
    COMPARATIVE = "COMPARATIVE"
    SUPERLATIVE = "SUPERLATIVE"
    UNKNOWN = "UNKNOWN"

    @property
    def pos(self) -> POSCategory:
        return _FORM_POS[self]


_FORM_POS = {
    InflectionForm.BASE: POSCategory.VERB,
    InflectionForm.THIRD_SG: POSCategory.VERB,
    InflectionForm.PAST: POSCategory.VERB,
    InflectionForm.GERUND: POSCategory.VERB,
    InflectionForm.PAST_PART: POSCategory.VERB,
    InflectionForm.SINGULAR: POSCategory.NOUN,
    InflectionForm.PLURAL: POSCategory.NOUN,
    InflectionForm.POSITIVE: POSCategory.ADJ,
    InflectionForm.COMPARATIVE: POSCategory.ADJ,
    InflectionForm.SUPERLATIVE: POSCategory.ADJ,
    InflectionForm.UNKNOWN: POSCategory.OTHER,
}

BASE_FORMS = {
    POSCategory.VERB: InflectionForm.BASE,
    POSCategory.NOUN: InflectionForm.SINGULAR,
    POSCategory.ADJ: InflectionForm.POSITIVE,
}

KnownWords = Mapping[str, Set[POSCategory]]


@dataclass
class IrregularTable:
    """Irregular forms, keyed both ways."""

    forward: dict[tuple[str, InflectionForm], str] = field(default_factory=dict)
    inverse: dict[str, list[tuple[str, InflectionForm]]] = field(default_factory=dict)

    def add(self, lemma: str, form: InflectionForm, surface: str) -> None:
        self.forward.setdefault((lemma, form), surface)
        # "cut/PAST/cut" must not make every "cut" look like a past tense.
        if surface != lemma:
            self.inverse.setdefault(surface, []).append((lemma, form))

    def __len__(self) -> int:
        return len(self.forward)


def load_irregulars(path: str | Path | None = None) -> IrregularTable:
    """Read `lemma TAB form TAB surface` rows; the bundled table by default."""
    table_path = Path(path) if path is not None else bundled_path("irregulars.tsv")
    table = IrregularTable()
    try:
        with open(table_path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 3:
                    raise ResourceLoadError(
                        f"expected 3 fields, got {len(fields)}",
                        str(table_path),
                        line_no,
                    )
                lemma, form_name, surface = (f.strip().lower() for f in fields)
                try:
                    form = InflectionForm(form_name.upper())
                except ValueError as e:
                    raise ResourceLoadError(
                        f"unknown form {form_name!r}", str(table_path), line_no
                    ) from e
                if form in BASE_FORMS.values() or form is InflectionForm.UNKNOWN:
                    raise ResourceLoadError(
                        f"{form} is not an inflected form", str(table_path), line_no
                    )
                table.add(lemma, form, surface)
    except OSError as e:
        raise ResourceLoadError(str(e), str(table_path)) from e
    logger.info("Loaded %d irregular forms from %s", len(table), table_path)
    return table


# -- regular rules --------------------------------------------------------------


def _is_vowel(word: str, i: int) -> bool:
    return word[i] in VOWELS


def count_syllables(word: str) -> int:
    """Vowel groups, ignoring a silent final e."""
    word = word.lower().lstrip("y")
    n = len(re.findall(r"[aeiouy]+", word))
    if word.endswith("e") and not word.endswith(("le", "ee", "ye")) and n > 1:
        n -= 1
    return max(n, 1)


def _doubles_final(word: str) -> bool:
    """Consonant-vowel-consonant monosyllables double their last letter."""
    return (
        len(word) >= 3
        and word[-1] not in VOWELS + "wxy"
        and word[-2] in VOWELS
        and word[-3] not in VOWELS
        and count_syllables(word) == 1
    )


def _consonant_y(word: str) -> bool:
    return len(word) >= 2 and word.endswith("y") and word[-2] not in VOWELS


def _third_sg(word: str) -> str:
    if _consonant_y(word):
        return word[:-1] + "ies"
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    if word.endswith("o") and len(word) >= 2 and word[-2] not in VOWELS:
        return word + "es"
    return word + "s"


def _past(word: str) -> str:
    if word.endswith("e"):
        return word + "d"
    if _consonant_y(word):
        return word[:-1] + "ied"
    if _doubles_final(word):
        return word + word[-1] + "ed"
    return word + "ed"


def _gerund(word: str) -> str:
    if word.endswith(("ee", "ye", "oe")):
        return word + "ing"
    if word.endswith("e") and len(word) > 2:
        return word[:-1] + "ing"
    if _doubles_final(word):
        return word + word[-1] + "ing"
    return word + "ing"


def _takes_suffix_grade(word: str) -> bool:
    syllables = count_syllables(word)
    if syllables == 1:
        return True
    return syllables == 2 and word.endswith(("y", "er", "le", "ow"))


def _grade(word: str, suffix: str) -> str:
    if word.endswith("e"):
        return word + suffix[1:]
    if _consonant_y(word):
        return word[:-1] + "i" + suffix
    if _doubles_final(word):
        return word + word[-1] + suffix
    return word + suffix


_REGULAR = {
    InflectionForm.THIRD_SG: _third_sg,
    InflectionForm.PLURAL: _third_sg,
    InflectionForm.PAST: _past,
    InflectionForm.PAST_PART: _past,
    InflectionForm.GERUND: _gerund,
}


def inflect_to(lemma: str, form: InflectionForm, table: IrregularTable) -> str:
    """Realize `lemma` in `form`; base forms and UNKNOWN return the lemma."""
    lemma = lemma.lower()
    if form in BASE_FORMS.values() or form is InflectionForm.UNKNOWN or not lemma:
        return lemma

    irregular = table.forward.get((lemma, form))
    if irregular is None and form is InflectionForm.PAST_PART:
        irregular = table.forward.get((lemma, InflectionForm.PAST))
    if irregular is not None:
        return irregular

    if " " in lemma:
        head, rest = lemma.split(" ", 1)
        if form.pos is POSCategory.NOUN:
            # Compound nouns pluralize their last word.
            init, last = lemma.rsplit(" ", 1)
            return f"{init} {inflect_to(last, form, table)}"
        if form.pos is POSCategory.ADJ:
            return _periphrastic(lemma, form)
        return f"{inflect_to(head, form, table)} {rest}"

    if form in (InflectionForm.COMPARATIVE, InflectionForm.SUPERLATIVE):
        if not _takes_suffix_grade(lemma):
            return _periphrastic(lemma, form)
        return _grade(lemma, "er" if form is InflectionForm.COMPARATIVE else "est")
    return _REGULAR[form](lemma)


def _periphrastic(lemma: str, form: InflectionForm) -> str:
    return f"{'more' if form is InflectionForm.COMPARATIVE else 'most'} {lemma}"


# -- detection ------------------------------------------------------------------


# Polysyllabic stems that usually hide a final e (generat, decid, describ).
_LONG_VOWEL_STEMS = ("at", "id", "ud", "ut", "os", "us", "ib", "ob", "ir", "ur")


def _wants_e(stem: str) -> bool:
    """Guess whether an -ed/-ing stem lost a final e (danc -> dance)."""
    if stem.endswith(("v", "z", "c", "i")):
        return True
    if stem.endswith(("dg", "lg", "ng", "rg")):
        return True
    if (
        len(stem) > 2
        and stem[-1] in "bdgklmrst"
        and stem[-2] in VOWELS
        and stem[-3] not in VOWELS
        and not stem.endswith("er")
        and (count_syllables(stem) == 1 or stem.endswith(_LONG_VOWEL_STEMS))
    ):
        return True
    if stem.endswith(("an", "in")) and not stem.endswith(("ain", "oin", "oan")):
        return True
    if len(stem) > 1 and stem.endswith("l") and stem[-2] not in VOWELS + "l":
        return True
    return stem.endswith(("th", "ang", "un", "cr", "vr", "rs", "ps", "tr"))


def _undoubled(stem: str) -> str | None:
    if (
        len(stem) > 3
        and stem[-1] == stem[-2]
        and stem[-1] not in VOWELS + "lsfz"
        and stem[-3] in VOWELS
        and stem[-4] not in VOWELS
    ):
        return stem[:-1]
    return None


def _suffixed_stems(stem: str) -> list[str]:
    """Lemma guesses for a stem left after removing -ed/-ing/-er/-est."""
    undoubled = _undoubled(stem)
    if undoubled is not None:
        return [undoubled, stem]
    if _wants_e(stem):
        return [stem + "e", stem]
    return [stem, stem + "e"]


def _reversals(word: str, form: InflectionForm) -> list[str]:
    out: list[str] = []
    if form in (InflectionForm.THIRD_SG, InflectionForm.PLURAL):
        if word.endswith("ies") and len(word) > 4:
            out.append(word[:-3] + "y")
        if word.endswith("es"):
            if word.endswith(("sses", "shes", "ches", "xes", "zes", "oes")):
                out.extend([word[:-2], word[:-1]])
            else:
                out.extend([word[:-1], word[:-2]])
        elif word.endswith("s") and not word.endswith("ss"):
            out.append(word[:-1])
    elif form is InflectionForm.PAST:
        if word.endswith("ied") and len(word) > 4:
            out.append(word[:-3] + "y")
        if word.endswith("ed"):
            out.extend(_suffixed_stems(word[:-2]))
    elif form is InflectionForm.GERUND:
        if word.endswith("ing"):
            out.extend(_suffixed_stems(word[:-3]))
    elif form in (InflectionForm.COMPARATIVE, InflectionForm.SUPERLATIVE):
        suffix = "er" if form is InflectionForm.COMPARATIVE else "est"
        if word.endswith("i" + suffix):
            out.append(word[: -len(suffix) - 1] + "y")
        if word.endswith(suffix):
            out.extend(_suffixed_stems(word[: -len(suffix)]))
    return list(
        dict.fromkeys(c for c in out if len(c) >= 3 and re.search(r"[aeiouy]", c))
    )


_RULE_FORMS = {
    POSCategory.VERB: (
        InflectionForm.GERUND,
        InflectionForm.PAST,
        InflectionForm.THIRD_SG,
    ),
    POSCategory.NOUN: (InflectionForm.PLURAL,),
    POSCategory.ADJ: (InflectionForm.SUPERLATIVE, InflectionForm.COMPARATIVE),
}


def _is_known(word: str, pos: POSCategory, known: KnownWords | None) -> bool:
    return known is not None and pos in known.get(word, ())


def detect_form(
    surface: str,
    pos: POSCategory,
    table: IrregularTable,
    known: KnownWords | None = None,
) -> tuple[str, InflectionForm]:
    """Return (lemma, form) for `surface` read as a word of category `pos`."""
    word = surface.strip().lower()
    if pos not in BASE_FORMS:
        return word, InflectionForm.UNKNOWN

    for lemma, form in table.inverse.get(word, ()):
        if form.pos is pos:
            return lemma, form

    if " " in word:
        head, rest = word.split(" ", 1)
        if pos is POSCategory.ADJ and head in ("more", "most"):
            if head == "more":
                return rest, InflectionForm.COMPARATIVE
            return rest, InflectionForm.SUPERLATIVE
        if pos is POSCategory.NOUN:
            init, last = word.rsplit(" ", 1)
            lemma, form = detect_form(last, pos, table, known)
            return f"{init} {lemma}", form
        lemma, form = detect_form(head, pos, table, known)
        return f"{lemma} {rest}", form

    # Every reversal must re-inflect to the surface; prefer lemmas the lexicon
    # knows, then the surface itself when it is a known base form.
    matches = [
        (cand, form)
        for form in _RULE_FORMS[pos]
        for cand in _reversals(word, form)
        if inflect_to(cand, form, table) == word
    ]
    for cand, form in matches:
        if _is_known(cand, pos, known):
            return cand, form
    if matches and not _is_known(word, pos, known):
        return matches[0]
    return word, BASE_FORMS[pos]


def match_case(surface: str, template: str) -> str:
    """Carry the template's capitalization over to `surface`."""
    if not surface or not template:
        return surface
    if len(template) > 1 and template.isupper():
        return surface.upper()
    if template[0].isupper():
        return surface[0].upper() + surface[1:]
    return surface


_INFLECTABLE = re.compile(r"^[^\W\d_]+(?:[ '-][^\W\d_]+)*$")


class Inflector:
    """Irregular table plus known-word map, shared by all pipeline workers."""

    def __init__(self, table: IrregularTable, known: KnownWords | None = None) -> None:
        self.table = table
        self.known = known
        self.uninflectable = 0

    @classmethod
    def from_lexicon(
        cls,
        table: IrregularTable,
        lexicon: Mapping[str, Mapping[POSCategory, int]],
    ) -> "Inflector":
        known = {word: frozenset(counts) for word, counts in lexicon.items()}
        return cls(table, known)

    def detect(self, surface: str, pos: POSCategory) -> tuple[str, InflectionForm]:
        return detect_form(surface, pos, self.table, self.known)

    def realize(self, lemma: str, form: InflectionForm, template: str) -> str | None:
        """Inflect `lemma` to `form` with the template's case; None if impossible."""
        if not _INFLECTABLE.match(lemma.strip()):
            if form not in BASE_FORMS.values() and form is not InflectionForm.UNKNOWN:
                self.uninflectable += 1
                logger.debug("Cannot inflect %r to %s", lemma, form)
                return None
            return match_case(lemma, template)
        return match_case(inflect_to(lemma, form, self.table), template)
