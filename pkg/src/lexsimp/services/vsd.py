# Verb sense disambiguation
# Ranks the target's VerbNet class-mates in context and votes for one class

import logging
import math
from collections.abc import Mapping, Sequence

from pydantic import BaseModel, ConfigDict

from ..config import VsdConfig
from ..errors import ClassVoteError, NotAVerbNetVerb
from ..models.candidate import Candidate, ModuleId
from ..models.instance import Instance, POSCategory
from .inflection import Inflector
from .masked_lm import MaskedLMScorer, ScoredText, fill_rank, make_masked_context
from .verbnet import VerbLexicon, classes_for_verb, members_of_classes

logger = logging.getLogger(__name__)

__all__ = [
    "ClassVoteResult",
    "VsdConfig",
    "VsdOutcome",
    "candidate_pool",
    "class_membership",
    "class_vote",
    "vsd_candidates",
]


class ClassVoteResult(BaseModel):
    """Outcome of the top-k class vote."""

    model_config = ConfigDict(frozen=True)

    winning_class: str
    tally: dict[str, int]
    ranked_pool: list[tuple[str, float]]


class VsdOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    candidates: list[Candidate]
    vote: ClassVoteResult | None = None
    diagnostic: str | None = None


def candidate_pool(
    lex: VerbLexicon, target_lemma: str, cfg: VsdConfig
) -> tuple[frozenset[str], list[str]]:
    """The target's classes and the sorted union of their other members."""
    class_ids = classes_for_verb(lex, target_lemma)
    if not class_ids:
        raise NotAVerbNetVerb(f"{target_lemma!r} is not a VerbNet member")
    members = members_of_classes(lex, sorted(class_ids), cfg.include_subclasses)
    pool = [m for m in members if m != target_lemma]
    if len(pool) > cfg.max_pool:
        logger.debug(
            "VSD pool for %r truncated from %d to %d",
            target_lemma,
            len(pool),
            cfg.max_pool,
        )
    return class_ids, pool[: cfg.max_pool]


def class_membership(
    lex: VerbLexicon, class_ids: frozenset[str], include_subclasses: bool
) -> dict[str, frozenset[str]]:
    """Lemma -> the candidate classes it counts toward."""
    membership: dict[str, set[str]] = {}
    for class_id in class_ids:
        for lemma in members_of_classes(lex, [class_id], include_subclasses):
            membership.setdefault(lemma, set()).add(class_id)
    return {lemma: frozenset(ids) for lemma, ids in membership.items()}


def class_vote(
    scored_pool: Sequence[tuple[str, float]],
    membership: Mapping[str, frozenset[str]],
    cfg: VsdConfig,
) -> ClassVoteResult:
    """Count class votes over the best `k` pool members.

    A lemma votes once for every class it belongs to. Ties go to the class
    holding the highest-ranked member, then to the smaller class id.
    """
    ranked = sorted(scored_pool, key=lambda item: (-item[1], item[0]))
    if not ranked:
        raise ClassVoteError("nothing to vote on")

    tally: dict[str, int] = {}
    first_rank: dict[str, int] = {}
    for rank, (lemma, _) in enumerate(ranked[: cfg.k]):
        for class_id in membership.get(lemma, ()):
            tally[class_id] = tally.get(class_id, 0) + 1
            first_rank.setdefault(class_id, rank)
    if not tally:
        raise ClassVoteError("no ranked member belongs to a candidate class")

    winner = min(tally, key=lambda c: (-tally[c], first_rank[c], c))
    return ClassVoteResult(
        winning_class=winner, tally=dict(sorted(tally.items())), ranked_pool=ranked
    )


async def vsd_candidates(
    instance: Instance,
    lex: VerbLexicon,
    scorer: MaskedLMScorer,
    inflector: Inflector,
    cfg: VsdConfig,
) -> VsdOutcome:
    """Members of the class that best fits the target's context."""
    target_lemma, form = inflector.detect(instance.surface, POSCategory.VERB)
    try:
        class_ids, pool = candidate_pool(lex, target_lemma, cfg)
    except NotAVerbNetVerb:
        logger.debug("VSD skipped: %r is not a VerbNet verb", target_lemma)
        return VsdOutcome(candidates=[], diagnostic="not_a_verbnet_verb")

    realized: dict[str, str] = {}
    for lemma in pool:
        surface = inflector.realize(lemma, form, instance.surface)
        if surface is not None:
            realized[lemma] = surface
    by_surface: dict[str, str] = {}
    for lemma, surface in realized.items():
        by_surface.setdefault(surface, lemma)

    ctx = make_masked_context(instance)
    scored: list[ScoredText] = await fill_rank(scorer, ctx, list(by_surface))
    lemma_scores = {by_surface[s.text]: s.log_prob for s in scored}

    membership = class_membership(lex, class_ids, cfg.include_subclasses)
    try:
        vote = class_vote(list(lemma_scores.items()), membership, cfg)
    except ClassVoteError:
        return VsdOutcome(candidates=[], diagnostic="empty_vsd_pool")

    members = members_of_classes(lex, [vote.winning_class], cfg.include_subclasses)
    candidates = []
    for lemma in members:
        if lemma == target_lemma:
            continue
        surface = realized.get(lemma)
        if surface is None:
            surface = inflector.realize(lemma, form, instance.surface)
        if surface is None:
            continue
        candidates.append(
            Candidate(
                lemma=lemma,
                surface=surface,
                source=ModuleId.VSD,
                module_score=lemma_scores.get(lemma, -math.inf),
            )
        )
    candidates.sort(key=lambda c: (-c.module_score, c.lemma))
    logger.debug(
        "VSD for %r chose %s with %d members",
        target_lemma,
        vote.winning_class,
        len(candidates),
    )
    return VsdOutcome(candidates=candidates, vote=vote)
