# Lexical resource models
# Verb classes and paraphrase records

import math

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .instance import normalize


class VerbClass(BaseModel):
    """A VerbNet class or subclass."""

    model_config = ConfigDict(frozen=True)

    class_id: str = Field(..., min_length=1)
    members: tuple[str, ...] = ()
    subclass_ids: tuple[str, ...] = ()
    parent_id: str | None = None


class ParaphraseEntry(BaseModel):
    """One lexical paraphrase record."""

    model_config = ConfigDict(frozen=True)

    source: str = Field(..., min_length=1)
    target: str = Field(..., min_length=1)
    syntactic_tag: str
    quality: float
    entailment: str = ""

    @field_validator("quality")
    @classmethod
    def validate_quality(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("quality must be finite")
        return v

    @model_validator(mode="after")
    def check_distinct(self) -> "ParaphraseEntry":
        if normalize(self.source) == normalize(self.target):
            raise ValueError("source and target must differ")
        return self


class KGNode(BaseModel):
    """A synonym-graph node with its surface labels."""

    model_config = ConfigDict(frozen=True)

    node_id: str = Field(..., min_length=1)
    primary_label: str = Field(..., min_length=1)
    aliases: tuple[str, ...] = ()
    lang: str | None = None

    @property
    def labels(self) -> tuple[str, ...]:
        return (self.primary_label, *self.aliases)
