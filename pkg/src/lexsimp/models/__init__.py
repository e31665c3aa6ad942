# Domain models package
# Core data models for the lexical simplification pipeline

from .candidate import MODULE_ORDER, Candidate, ModuleId
from .instance import (
    GoldInstance,
    Instance,
    POSCategory,
    PredictionRecord,
    locate_target_span,
    normalize,
)
from .lexicon import KGNode, ParaphraseEntry, VerbClass
from .report import EvaluationReport, MetricConfig

__all__ = [
    "MODULE_ORDER",
    "Candidate",
    "EvaluationReport",
    "GoldInstance",
    "KGNode",
    "Instance",
    "MetricConfig",
    "ModuleId",
    "POSCategory",
    "ParaphraseEntry",
    "PredictionRecord",
    "VerbClass",
    "locate_target_span",
    "normalize",
]
