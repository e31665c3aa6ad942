"""Masked-LM wire protocol models (POST /v1/maskfill)"""

import math
from typing import Literal, Self

from pydantic import BaseModel, Field, field_validator, model_validator


class MaskFillRequest(BaseModel):
    """Request body for the maskfill endpoint."""

    mode: Literal["generate", "score"]
    left: str
    right: str
    top_n: int | None = Field(None, ge=1)
    candidates: list[str] | None = None

    @model_validator(mode="after")
    def check_mode_fields(self) -> Self:
        if self.mode == "generate" and self.top_n is None:
            raise ValueError("generate requests need top_n")
        if self.mode == "score" and not self.candidates:
            raise ValueError("score requests need a non-empty candidates list")
        return self

    model_config = {
        "json_schema_extra": {
            "example": {
                "mode": "score",
                "left": "Stocks ",
                "right": " from 10 to 12",
                "candidates": ["climb", "go up"],
            }
        }
    }


class MaskFillResult(BaseModel):
    """One scored text."""

    text: str = Field(..., min_length=1)
    log_prob: float

    @field_validator("log_prob")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("log_prob must be finite")
        return v


class MaskFillResponse(BaseModel):
    """Response body for the maskfill endpoint."""

    results: list[MaskFillResult]
