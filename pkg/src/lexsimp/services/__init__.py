# Services package
# Resource loaders, candidate modules, the pipeline and the evaluator

from .metrics import evaluate, evaluate_records
from .pipeline import InstanceResult, InstanceTrace, SimplificationPipeline
from .resources import Resources, load_resources, validate_resources

__all__ = [
    "InstanceResult",
    "InstanceTrace",
    "Resources",
    "SimplificationPipeline",
    "evaluate",
    "evaluate_records",
    "load_resources",
    "validate_resources",
]
