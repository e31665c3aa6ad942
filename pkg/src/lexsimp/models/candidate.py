# Candidate substitute models

from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field


class ModuleId(StrEnum):
    """Candidate generation modules."""

    VSD = "vsd"
    PPDB = "ppdb"
    MLM = "mlm"
    KG = "kg"


# Canonical module order; also the priority used when re-ranking falls back.
MODULE_ORDER: tuple[ModuleId, ...] = (
    ModuleId.VSD,
    ModuleId.PPDB,
    ModuleId.MLM,
    ModuleId.KG,
)


class Candidate(BaseModel):
    """A proposed substitute for the complex word."""

    model_config = ConfigDict(frozen=True)

    lemma: str = Field(..., min_length=1)
    surface: str = Field(..., min_length=1)
    source: ModuleId
    module_score: float = 0.0
    final_score: float | None = None
    rank: int | None = Field(default=None, ge=1)
