# TSAR-2022 evaluation metrics
# MAP@K, Potential@K, ACC@K@top1 and ACC@1 over paired gold/run files

import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray
from rich.table import Table

from ..errors import EvaluationError, TsvParseError
from ..models.instance import GoldInstance, PredictionRecord, normalize
from ..models.report import EvaluationReport, MetricConfig
from .tsv_io import gold_top1_set, parse_gold_tsv, parse_run_tsv

logger = logging.getLogger(__name__)


def relevance_vector(
    preds: PredictionRecord, gold: GoldInstance, k: int
) -> NDArray[np.float64]:
    """1.0 where the prediction is a gold annotation, for the first k predictions."""
    gold_set = gold.gold_set
    return np.array(
        [1.0 if normalize(p) in gold_set else 0.0 for p in preds.substitutes[:k]],
        dtype=np.float64,
    )


def average_precision_at_k(rel: Sequence[float] | NDArray[np.float64], k: int) -> float:
    """Precision at every relevant position, summed and divided by the constant k."""
    rel = np.asarray(rel, dtype=np.float64)[:k]
    if rel.size == 0:
        return 0.0
    precision = np.cumsum(rel) / np.arange(1, rel.size + 1)
    return float(np.sum(rel * precision) / k)


def _hit_at_k(preds: PredictionRecord, targets: set[str], k: int) -> float:
    return 1.0 if any(normalize(p) in targets for p in preds.substitutes[:k]) else 0.0


def check_pairing(
    golds: Sequence[GoldInstance], preds: Sequence[PredictionRecord]
) -> None:
    """Gold and run records must line up one-to-one by position."""
    if not golds:
        raise EvaluationError("gold file has no instances")
    if len(golds) != len(preds):
        raise EvaluationError(
            f"gold has {len(golds)} instances but the run has {len(preds)}"
        )
    for i, (gold, pred) in enumerate(zip(golds, preds, strict=True), start=1):
        instance = gold.instance
        if (normalize(instance.context), normalize(instance.target)) != (
            normalize(pred.context),
            normalize(pred.target),
        ):
            line = gold.line_no if gold.line_no is not None else i
            raise EvaluationError(
                f"record {i} (gold line {line}) does not match: "
                f"gold target {instance.target!r}, run target {pred.target!r}"
            )


def map_at_k(
    golds: Sequence[GoldInstance], preds: Sequence[PredictionRecord], k: int
) -> float:
    return float(
        np.mean(
            [
                average_precision_at_k(relevance_vector(p, g, k), k)
                for g, p in zip(golds, preds, strict=True)
            ]
        )
    )


def potential_at_k(
    golds: Sequence[GoldInstance], preds: Sequence[PredictionRecord], k: int
) -> float:
    return float(
        np.mean(
            [_hit_at_k(p, g.gold_set, k) for g, p in zip(golds, preds, strict=True)]
        )
    )


def accuracy_at_k_top1(
    golds: Sequence[GoldInstance], preds: Sequence[PredictionRecord], k: int
) -> float:
    return float(
        np.mean(
            [
                _hit_at_k(p, gold_top1_set(g), k)
                for g, p in zip(golds, preds, strict=True)
            ]
        )
    )


def metric_names(cfg: MetricConfig) -> list[str]:
    """Report keys in display order; Potential@1 is reported as ACC@1."""
    names = ["ACC@1"] if 1 in cfg.potential_k else []
    names += [f"ACC@{k}@Top1" for k in cfg.acc_top1_k]
    names += [f"MAP@{k}" for k in cfg.map_k]
    names += [f"Potential@{k}" for k in cfg.potential_k if k != 1]
    return names


def evaluate_records(
    golds: Sequence[GoldInstance],
    preds: Sequence[PredictionRecord],
    cfg: MetricConfig | None = None,
    per_instance: bool = False,
) -> EvaluationReport:
    """Compute the configured metric suite over paired records."""
    cfg = cfg or MetricConfig()
    check_pairing(golds, preds)

    metrics: dict[str, float] = {}
    for k in cfg.potential_k:
        if k == 1:
            metrics["ACC@1"] = potential_at_k(golds, preds, 1)
    for k in cfg.acc_top1_k:
        metrics[f"ACC@{k}@Top1"] = accuracy_at_k_top1(golds, preds, k)
    for k in cfg.map_k:
        metrics[f"MAP@{k}"] = map_at_k(golds, preds, k)
    for k in cfg.potential_k:
        if k != 1:
            metrics[f"Potential@{k}"] = potential_at_k(golds, preds, k)

    breakdown: list[dict[str, Any]] | None = None
    if per_instance:
        breakdown = []
        for gold, pred in zip(golds, preds, strict=True):
            row: dict[str, Any] = {"target": gold.instance.target}
            for k in cfg.map_k:
                rel = relevance_vector(pred, gold, k)
                row[f"AP@{k}"] = average_precision_at_k(rel, k)
            for k in cfg.potential_k:
                row[f"Potential@{k}"] = _hit_at_k(pred, gold.gold_set, k)
            breakdown.append(row)

    return EvaluationReport(
        metrics={name: metrics[name] for name in metric_names(cfg)},
        instances=len(golds),
        per_instance=breakdown,
    )


def evaluate(
    gold_path: str | Path,
    run_path: str | Path,
    cfg: MetricConfig | None = None,
    per_instance: bool = False,
) -> EvaluationReport:
    """Evaluate a run file against a gold file."""
    try:
        with open(gold_path, "rb") as f:
            golds = parse_gold_tsv(f)
        with open(run_path, "rb") as f:
            preds = parse_run_tsv(f)
    except TsvParseError as e:
        raise EvaluationError(f"cannot parse input: {e}") from e
    except OSError as e:
        raise EvaluationError(str(e)) from e
    report = evaluate_records(golds, preds, cfg, per_instance)
    logger.info("Evaluated %d instances from %s", report.instances, run_path)
    return report


def render_table(report: EvaluationReport, title: str | None = None) -> Table:
    """Aligned two-column table of metric values."""
    table = Table(title=title or f"TSAR-2022 metrics ({report.instances} instances)")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right", style="green")
    for name, value in report.metrics.items():
        table.add_row(name, f"{value:.4f}")
    return table
