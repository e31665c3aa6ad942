# Task instance models
# Instances, gold annotations, prediction records and span resolution

import re
from collections import Counter
from enum import StrEnum
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..errors import SpanResolutionError

MAX_SUBSTITUTES = 10

_ASCII_WHITESPACE = " \t\n\r\x0b\x0c"
# A letter is a word character that is neither a digit nor an underscore.
_LETTER = r"[^\W\d_]"


class POSCategory(StrEnum):
    """Coarse part-of-speech category of a target word."""

    VERB = "VERB"
    NOUN = "NOUN"
    ADJ = "ADJ"
    OTHER = "OTHER"
    UNASSIGNED = "UNASSIGNED"


def normalize(text: str) -> str:
    """Normalization used for every equality test: trim, then case-fold."""
    return text.strip(_ASCII_WHITESPACE).casefold()


def locate_target_span(context: str, target: str) -> tuple[int, int]:
    """Return the first whole-token, case-insensitive occurrence of target."""
    if not context or not target:
        raise SpanResolutionError("context and target must be non-empty")
    pattern = re.compile(
        rf"(?<!{_LETTER}){re.escape(target)}(?!{_LETTER})", re.IGNORECASE
    )
    match = pattern.search(context)
    if match is None:
        raise SpanResolutionError(f"target {target!r} not found in context")
    return match.start(), match.end()


class Instance(BaseModel):
    """One task item: a sentence with a single marked complex word."""

    model_config = ConfigDict(frozen=True)

    context: str = Field(..., min_length=1)
    target: str = Field(..., min_length=1)
    target_span: tuple[int, int]
    pos: POSCategory = POSCategory.UNASSIGNED

    @model_validator(mode="after")
    def check_span(self) -> Self:
        if "\n" in self.context or "\r" in self.context:
            raise ValueError("context must not contain newlines")
        if any(ch in self.target for ch in "\t\n\r"):
            raise ValueError("target must not contain tabs or newlines")
        start, end = self.target_span
        if not 0 <= start < end <= len(self.context):
            raise ValueError(f"span {self.target_span} outside context")
        if self.context[start:end].casefold() != self.target.casefold():
            raise ValueError("span does not cover the target")
        return self

    @classmethod
    def create(cls, context: str, target: str) -> "Instance":
        """Build an instance, resolving the target span."""
        return cls(
            context=context,
            target=target,
            target_span=locate_target_span(context, target),
        )

    @property
    def surface(self) -> str:
        """Target as written in the context."""
        start, end = self.target_span
        return self.context[start:end]

    @property
    def key(self) -> tuple[str, str]:
        return self.context, self.target

    def with_pos(self, pos: POSCategory) -> "Instance":
        """Return a tagged copy; an instance is tagged exactly once."""
        if self.pos is not POSCategory.UNASSIGNED:
            raise ValueError(f"instance already tagged as {self.pos}")
        return self.model_copy(update={"pos": pos})


class GoldInstance(BaseModel):
    """An instance with its crowd-sourced substitutes (duplicates are votes)."""

    model_config = ConfigDict(frozen=True)

    instance: Instance
    annotations: list[str] = Field(..., min_length=1)
    line_no: int | None = None

    @field_validator("annotations")
    @classmethod
    def validate_annotations(cls, v: list[str]) -> list[str]:
        if any(not normalize(a) for a in v):
            raise ValueError("annotations must be non-empty after trimming")
        return v

    @property
    def vote_counts(self) -> Counter[str]:
        return Counter(normalize(a) for a in self.annotations)

    @property
    def gold_set(self) -> set[str]:
        return {normalize(a) for a in self.annotations}


class PredictionRecord(BaseModel):
    """A system's ordered substitutes for one instance, best first."""

    model_config = ConfigDict(frozen=True)

    context: str
    target: str
    substitutes: list[str] = Field(default_factory=list, max_length=MAX_SUBSTITUTES)

    @field_validator("substitutes")
    @classmethod
    def validate_unique(cls, v: list[str]) -> list[str]:
        normalized = [normalize(s) for s in v]
        if any(not s for s in normalized):
            raise ValueError("substitutes must be non-empty")
        if len(set(normalized)) != len(normalized):
            raise ValueError("substitutes must be unique after normalization")
        return v

    @property
    def key(self) -> tuple[str, str]:
        return self.context, self.target
