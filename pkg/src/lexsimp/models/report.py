# Evaluation models
# Metric cutoffs and evaluation reports

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator


class MetricConfig(BaseModel):
    """Cutoffs for the TSAR-2022 metric suite."""

    model_config = ConfigDict(extra="forbid")

    map_k: list[int] = Field(default_factory=lambda: [1, 3, 5, 10])
    potential_k: list[int] = Field(default_factory=lambda: [1, 3, 5, 10])
    acc_top1_k: list[int] = Field(default_factory=lambda: [1, 2, 3])

    @field_validator("map_k", "potential_k", "acc_top1_k")
    @classmethod
    def validate_cutoffs(cls, v: list[int]) -> list[int]:
        if not v:
            raise ValueError("at least one cutoff is required")
        if any(k < 1 for k in v):
            raise ValueError("cutoffs must be positive")
        if any(b <= a for a, b in zip(v, v[1:], strict=False)):
            raise ValueError("cutoffs must be strictly increasing")
        return v


class EvaluationReport(BaseModel):
    """Metric values over an evaluated gold/prediction pair."""

    metrics: dict[str, float]
    instances: int = Field(..., ge=1)
    per_instance: list[dict[str, Any]] | None = None

    @field_validator("metrics")
    @classmethod
    def validate_range(cls, v: dict[str, float]) -> dict[str, float]:
        for name, value in v.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} outside [0, 1]")
        return v

    def to_document(self) -> dict[str, Any]:
        """Machine-readable form used by `lexsimp eval --format json`."""
        document: dict[str, Any] = {
            "metrics": dict(self.metrics),
            "instances": self.instances,
        }
        if self.per_instance is not None:
            document["per_instance"] = self.per_instance
        return document
