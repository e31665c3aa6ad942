# Simplification pipeline
# Routes each instance through its candidate modules, normalizes, re-ranks

import asyncio
import logging
import math
from collections.abc import Sequence
from time import perf_counter

from pydantic import BaseModel, Field

from ..config import AppConfig, RunConfig
from ..errors import EmptyCandidatesError, MaskedLMBackendError
from ..models.candidate import MODULE_ORDER, Candidate, ModuleId
from ..models.instance import Instance, POSCategory, PredictionRecord, normalize
from .inflection import InflectionForm, Inflector
from .kg import link_entity, synonym_candidates
from .masked_lm import (
    MaskedLMScorer,
    fill_rank,
    generate_fill_candidates,
    make_masked_context,
)
from .pos_tagger import tag_target_pos
from .ppdb import paraphrases_for
from .resources import Resources
from .routing import modules_for_pos
from .vsd import vsd_candidates

logger = logging.getLogger(__name__)


class ModuleTrace(BaseModel):
    """What one candidate module did for one instance."""

    module: ModuleId
    candidates: list[str] = Field(default_factory=list)
    seconds: float = 0.0
    error: str | None = None
    note: str | None = None


class InflectionDecision(BaseModel):
    candidate: str
    source: ModuleId
    lemma: str
    form: InflectionForm
    surface: str | None
    kept: bool = True


class InstanceTrace(BaseModel):
    """Full account of how a record was produced."""

    context: str
    target: str
    pos: POSCategory = POSCategory.UNASSIGNED
    target_lemma: str = ""
    target_form: InflectionForm = InflectionForm.UNKNOWN
    routed: list[ModuleId] = Field(default_factory=list)
    modules: list[ModuleTrace] = Field(default_factory=list)
    vsd_class: str | None = None
    inflections: list[InflectionDecision] = Field(default_factory=list)
    ranking: list[Candidate] = Field(default_factory=list)
    fallback: bool = False
    diagnostics: list[str] = Field(default_factory=list)

    @property
    def failures(self) -> dict[ModuleId, str]:
        return {m.module: m.error for m in self.modules if m.error is not None}

    @property
    def empty(self) -> bool:
        return not self.ranking

    @property
    def degraded(self) -> bool:
        """True when any diagnostic was raised while producing the record."""
        return (
            bool(self.diagnostics) or bool(self.failures) or self.empty or self.fallback
        )


class InstanceResult(BaseModel):
    record: PredictionRecord
    trace: InstanceTrace


class RerankOutcome(BaseModel):
    ranked: list[Candidate]
    record: PredictionRecord
    fallback: bool = False
    diagnostic: str | None = None


def _canonical(modules: Sequence[ModuleId]) -> list[ModuleId]:
    return sorted(modules, key=MODULE_ORDER.index)


async def _run_module(
    module: ModuleId,
    instance: Instance,
    resources: Resources,
    config: AppConfig,
    trace: InstanceTrace,
    module_trace: ModuleTrace,
) -> list[Candidate]:
    surface, lemma, pos = instance.surface, trace.target_lemma, instance.pos

    if module is ModuleId.VSD:
        if resources.verbnet is None:
            raise RuntimeError("VerbNet lexicon not loaded")
        outcome = await vsd_candidates(
            instance,
            resources.verbnet,
            resources.scorer,
            resources.inflector,
            config.vsd,
        )
        module_trace.note = outcome.diagnostic
        if outcome.vote is not None:
            trace.vsd_class = outcome.vote.winning_class
        return outcome.candidates

    if module is ModuleId.PPDB:
        if resources.ppdb is None:
            raise RuntimeError("PPDB index not loaded")
        limit = config.ppdb.limit
        if pos is POSCategory.VERB:
            return paraphrases_for(resources.ppdb, lemma, pos, limit)
        found = paraphrases_for(resources.ppdb, surface, pos, limit)
        if not found and normalize(lemma) != normalize(surface):
            found = paraphrases_for(resources.ppdb, lemma, pos, limit)
        return found

    if module is ModuleId.MLM:
        ctx = make_masked_context(instance)
        return await generate_fill_candidates(resources.scorer, ctx, config.mlm, lemma)

    if resources.graph is None or resources.linker is None:
        raise RuntimeError("synonym graph not loaded")
    node = link_entity(resources.graph, resources.linker, surface, instance.context)
    if node is None and normalize(lemma) != normalize(surface):
        node = link_entity(resources.graph, resources.linker, lemma, instance.context)
    if node is None:
        module_trace.note = "kg_unlinked"
        return []
    return synonym_candidates(
        resources.graph, node, config.kg.limit, config.kg.relation_name, config.kg.lang
    )


async def collect_candidates(
    instance: Instance, resources: Resources, config: AppConfig
) -> tuple[list[Candidate], InstanceTrace]:
    """Run every routed and enabled module; one failing module never stops the rest."""
    inflector = resources.inflector
    target_lemma, target_form = inflector.detect(instance.surface, instance.pos)
    routed = [
        m
        for m in _canonical(modules_for_pos(instance.pos, resources.routing))
        if m in config.run.modules
    ]
    trace = InstanceTrace(
        context=instance.context,
        target=instance.target,
        pos=instance.pos,
        target_lemma=target_lemma,
        target_form=target_form,
        routed=routed,
    )

    candidates: list[Candidate] = []
    for module in routed:
        module_trace = ModuleTrace(module=module)
        started = perf_counter()
        try:
            found = await _run_module(
                module, instance, resources, config, trace, module_trace
            )
        except Exception as e:
            payload = getattr(e, "payload", None)
            module_trace.error = f"{type(e).__name__}: {e}"
            trace.diagnostics.append(f"module_failed:{module}")
            logger.warning(
                "Module %s failed for %r: %s %s",
                module,
                instance.target,
                e,
                payload or "",
                exc_info=not isinstance(e, MaskedLMBackendError),
            )
            found = []
        module_trace.seconds = perf_counter() - started
        module_trace.candidates = [c.surface for c in found]
        if module_trace.note:
            trace.diagnostics.append(module_trace.note)
        trace.modules.append(module_trace)
        candidates.extend(found)

    if not candidates:
        raise EmptyCandidatesError(
            f"no candidates for {instance.target!r} "
            f"from {', '.join(routed) or 'no modules'}",
            trace,
        )
    return candidates, trace


def normalize_and_dedup(
    cands: Sequence[Candidate],
    instance: Instance,
    inflector: Inflector,
    cfg: RunConfig,
    decisions: list[InflectionDecision] | None = None,
) -> list[Candidate]:
    """Inflect candidates to the target's form and merge duplicates, earliest first."""
    target_lemma, target_form = inflector.detect(instance.surface, instance.pos)
    target_keys = {normalize(instance.surface), normalize(instance.target)}

    kept: list[Candidate] = []
    seen: set[str] = set()
    for cand in cands:
        if cand.source is ModuleId.VSD:
            lemma, surface = cand.lemma, cand.surface
        else:
            lemma, _ = inflector.detect(cand.surface, instance.pos)
            realized = inflector.realize(lemma, target_form, instance.surface)
            surface = realized if realized is not None else cand.surface
            if decisions is not None:
                decisions.append(
                    InflectionDecision(
                        candidate=cand.surface,
                        source=cand.source,
                        lemma=lemma,
                        form=target_form,
                        surface=realized,
                    )
                )

        key = normalize(surface)
        is_variant = key in target_keys or normalize(lemma) == normalize(target_lemma)
        if (cfg.drop_target_variants and is_variant) or key in seen or not key:
            if decisions is not None and cand.source is not ModuleId.VSD:
                decisions[-1] = decisions[-1].model_copy(update={"kept": False})
            continue
        seen.add(key)
        kept.append(cand.model_copy(update={"lemma": lemma, "surface": surface}))
    return kept


def _fallback_key(cand: Candidate) -> tuple[int, float, str]:
    return MODULE_ORDER.index(cand.source), -cand.module_score, normalize(cand.surface)


async def rerank_top_n(
    cands: Sequence[Candidate],
    instance: Instance,
    scorer: MaskedLMScorer,
    cfg: RunConfig,
) -> RerankOutcome:
    """Order candidates by fill score in context and keep the best `top_n`."""
    fallback, diagnostic = False, None
    try:
        scored = await fill_rank(
            scorer, make_masked_context(instance), [c.surface for c in cands]
        )
        by_surface = {c.surface: c for c in cands}
        ranked = [
            by_surface[s.text].model_copy(update={"final_score": s.log_prob, "rank": i})
            for i, s in enumerate(scored, start=1)
        ]
    except Exception as e:
        logger.warning(
            "Re-ranking %r fell back to module order: %s",
            instance.target,
            e,
            exc_info=not isinstance(e, MaskedLMBackendError),
        )
        fallback, diagnostic = True, f"rerank_fallback: {e}"
        ranked = [
            c.model_copy(update={"final_score": None, "rank": i})
            for i, c in enumerate(sorted(cands, key=_fallback_key), start=1)
        ]

    record = PredictionRecord(
        context=instance.context,
        target=instance.target,
        substitutes=[c.surface for c in ranked[: cfg.top_n]],
    )
    return RerankOutcome(
        ranked=ranked, record=record, fallback=fallback, diagnostic=diagnostic
    )


class SimplificationPipeline:
    """Turns instances into ranked substitute records."""

    def __init__(self, resources: Resources, config: AppConfig) -> None:
        self.resources = resources
        self.config = config

    async def simplify(self, instance: Instance) -> InstanceResult:
        if instance.pos is POSCategory.UNASSIGNED:
            pos = tag_target_pos(instance, self.resources.tagger)
            instance = instance.with_pos(pos)

        try:
            candidates, trace = await collect_candidates(
                instance, self.resources, self.config
            )
        except EmptyCandidatesError as e:
            trace = e.trace if isinstance(e.trace, InstanceTrace) else InstanceTrace(
                context=instance.context, target=instance.target, pos=instance.pos
            )
            trace.diagnostics.append("empty_candidates")
            logger.info("%s", e)
            record = PredictionRecord(context=instance.context, target=instance.target)
            return InstanceResult(record=record, trace=trace)

        deduped = normalize_and_dedup(
            candidates,
            instance,
            self.resources.inflector,
            self.config.run,
            decisions=trace.inflections,
        )
        outcome = await rerank_top_n(
            deduped, instance, self.resources.scorer, self.config.run
        )
        trace.ranking = outcome.ranked
        trace.fallback = outcome.fallback
        if outcome.diagnostic:
            trace.diagnostics.append(outcome.diagnostic)
        if not outcome.ranked:
            trace.diagnostics.append("empty_candidates")
        return InstanceResult(record=outcome.record, trace=trace)

    async def run(
        self, instances: Sequence[Instance], workers: int | None = None
    ) -> list[InstanceResult]:
        """Simplify every instance, at most `workers` at a time, in input order."""
        semaphore = asyncio.Semaphore(workers or self.config.run.workers)

        async def bounded(instance: Instance) -> InstanceResult:
            async with semaphore:
                return await self.simplify(instance)

        started = perf_counter()
        results = await asyncio.gather(*(bounded(i) for i in instances))
        logger.info(
            "Simplified %d instances in %.2fs", len(results), perf_counter() - started
        )
        return list(results)


def module_timings(results: Sequence[InstanceResult]) -> dict[ModuleId, float]:
    """Total seconds spent in each module across a run."""
    totals: dict[ModuleId, float] = {}
    for result in results:
        for module in result.trace.modules:
            totals[module.module] = totals.get(module.module, 0.0) + module.seconds
    return dict(sorted(totals.items(), key=lambda item: MODULE_ORDER.index(item[0])))


def is_finite_score(value: float | None) -> bool:
    return value is not None and math.isfinite(value)
