# Masked language model access
# Scorer protocol, the frequency stub, and the HTTP client for /v1/maskfill

import asyncio
import logging
import math
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any, Protocol, runtime_checkable

import httpx
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..config import (
    AppConfig,
    MlmConfig,
    Settings,
    apply_settings,
    bundled_path,
    open_text,
)
from ..errors import ConfigError, MaskedLMBackendError, ResourceLoadError
from ..models.candidate import Candidate, ModuleId
from ..models.instance import Instance, normalize
from ..models.wire import MaskFillRequest, MaskFillResponse

logger = logging.getLogger(__name__)

MASKFILL_PATH = "/v1/maskfill"
_SUBWORD_MARKERS = "Ġ▁"


class MaskedContext(BaseModel):
    """A sentence split around the masked word."""

    model_config = ConfigDict(frozen=True)

    left: str
    right: str
    original: str

    def fill(self, text: str) -> str:
        return f"{self.left}{text}{self.right}"


class ScoredText(BaseModel):
    model_config = ConfigDict(frozen=True)

    text: str = Field(..., min_length=1)
    log_prob: float

    @field_validator("log_prob")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("log_prob must be finite")
        return v


@runtime_checkable
class MaskedLMScorer(Protocol):
    """Fills and scores a masked position in context."""

    async def generate(self, ctx: MaskedContext, top_n: int) -> list[ScoredText]: ...

    async def score(
        self, ctx: MaskedContext, texts: Sequence[str]
    ) -> list[ScoredText]: ...


def make_masked_context(instance: Instance) -> MaskedContext:
    start, end = instance.target_span
    return MaskedContext(
        left=instance.context[:start],
        right=instance.context[end:],
        original=instance.context[start:end],
    )


# -- frequency stub ------------------------------------------------------------


class FrequencyLexicon:
    """Unigram counts with the totals needed for add-one smoothing."""

    def __init__(self, counts: Mapping[str, int]) -> None:
        self.counts = dict(counts)
        self.total = sum(self.counts.values())
        self.vocab = len(self.counts)


def load_frequency_lexicon(path: str | Path | None = None) -> FrequencyLexicon:
    """
    Read `word count` rows, tab or space separated and optionally gzipped.

    Defaults to the bundled seed table. Larger public frequency lists in the
    same two-column shape load unchanged.
    """
    lexicon_path = Path(path) if path is not None else bundled_path("frequency.tsv")
    counts: dict[str, int] = {}
    try:
        with open_text(lexicon_path) as f:
            for line_no, line in enumerate(f, start=1):
                line = line.rstrip()
                if not line or line.startswith("#"):
                    continue
                separator = "\t" if "\t" in line else " "
                word, _, count = line.rpartition(separator)
                try:
                    value = int(count)
                except ValueError as e:
                    raise ResourceLoadError(
                        f"invalid count {count!r}", str(lexicon_path), line_no
                    ) from e
                if value < 0:
                    raise ResourceLoadError(
                        "counts must be non-negative", str(lexicon_path), line_no
                    )
                key = word.strip().lower()
                counts[key] = counts.get(key, 0) + value
    except OSError as e:
        raise ResourceLoadError(str(e), str(lexicon_path)) from e
    if not counts:
        logger.warning("Frequency lexicon %s is empty", lexicon_path)
    logger.info("Loaded %d frequency entries from %s", len(counts), lexicon_path)
    return FrequencyLexicon(counts)


def stub_score(lexicon: FrequencyLexicon, text: str) -> float:
    """Laplace-smoothed unigram log-probability of the whitespace tokens of text."""
    denominator = lexicon.total + lexicon.vocab
    if denominator == 0:
        denominator = 1
    return sum(
        math.log((lexicon.counts.get(token, 0) + 1) / denominator)
        for token in text.lower().split()
    )


class FrequencyStubScorer:
    """Context-independent scorer for tests and offline runs."""

    def __init__(self, lexicon: FrequencyLexicon) -> None:
        self.lexicon = lexicon
        counts = lexicon.counts
        self._by_frequency = sorted(
            (w for w in counts if w.isalpha()), key=lambda w: (-counts[w], w)
        )

    @classmethod
    def bundled(cls) -> "FrequencyStubScorer":
        return cls(load_frequency_lexicon())

    async def generate(self, ctx: MaskedContext, top_n: int) -> list[ScoredText]:
        original = normalize(ctx.original)
        words = [w for w in self._by_frequency if w != original][:top_n]
        return [ScoredText(text=w, log_prob=stub_score(self.lexicon, w)) for w in words]

    async def score(self, ctx: MaskedContext, texts: Sequence[str]) -> list[ScoredText]:
        return [
            ScoredText(text=t, log_prob=stub_score(self.lexicon, t)) for t in texts
        ]


# -- remote backend ------------------------------------------------------------


def _maskfill_url(endpoint: str) -> str:
    base = endpoint.rstrip("/")
    return base if base.endswith(MASKFILL_PATH) else base + MASKFILL_PATH


class RemoteMaskedLMScorer:
    """Client for a masked-LM server speaking the /v1/maskfill protocol."""

    def __init__(
        self,
        endpoint: str,
        *,
        generate_endpoint: str | None = None,
        timeout: float = 10.0,
        max_concurrent: int = 8,
        retries: int = 2,
        backoff: float = 0.2,
        max_batch: int = 64,
        transport: httpx.AsyncBaseTransport | None = None,
    ) -> None:
        self.url = _maskfill_url(endpoint)
        self.generate_url = _maskfill_url(generate_endpoint or endpoint)
        self.retries = retries
        self.backoff = backoff
        self.max_batch = max_batch
        self._semaphore = asyncio.Semaphore(max_concurrent)
        self._client = httpx.AsyncClient(
            timeout=timeout,
            limits=httpx.Limits(max_connections=max_concurrent),
            transport=transport,
        )

    @classmethod
    def from_config(
        cls, cfg: MlmConfig, transport: httpx.AsyncBaseTransport | None = None
    ) -> "RemoteMaskedLMScorer":
        if not cfg.endpoint:
            raise ConfigError("mlm.endpoint is required for the remote backend")
        return cls(
            cfg.endpoint,
            generate_endpoint=cfg.generate_endpoint,
            timeout=cfg.timeout,
            max_concurrent=cfg.max_concurrent,
            retries=cfg.retries,
            backoff=cfg.backoff,
            max_batch=cfg.max_batch,
            transport=transport,
        )

    async def aclose(self) -> None:
        await self._client.aclose()

    async def __aenter__(self) -> "RemoteMaskedLMScorer":
        return self

    async def __aexit__(self, *exc_info: object) -> None:
        await self.aclose()

    async def generate(self, ctx: MaskedContext, top_n: int) -> list[ScoredText]:
        request = MaskFillRequest(
            mode="generate", left=ctx.left, right=ctx.right, top_n=top_n
        )
        response = await self._post(self.generate_url, request)
        if len(response.results) > top_n:
            raise MaskedLMBackendError(
                f"generate returned {len(response.results)} results for top_n={top_n}",
                {"url": self.generate_url, "mode": "generate"},
            )
        return [ScoredText(text=r.text, log_prob=r.log_prob) for r in response.results]

    async def score(self, ctx: MaskedContext, texts: Sequence[str]) -> list[ScoredText]:
        texts = list(texts)
        if not texts:
            return []
        batches = [
            texts[i : i + self.max_batch] for i in range(0, len(texts), self.max_batch)
        ]
        scored: list[ScoredText] = []
        for batch in batches:
            request = MaskFillRequest(
                mode="score", left=ctx.left, right=ctx.right, candidates=batch
            )
            response = await self._post(self.url, request)
            if len(response.results) != len(batch):
                raise MaskedLMBackendError(
                    f"score returned {len(response.results)} results "
                    f"for {len(batch)} candidates",
                    {"url": self.url, "mode": "score"},
                )
            scored.extend(
                ScoredText(text=text, log_prob=r.log_prob)
                for text, r in zip(batch, response.results, strict=True)
            )
        return scored

    async def _post(self, url: str, request: MaskFillRequest) -> MaskFillResponse:
        body = request.model_dump(exclude_none=True)
        diagnostic: dict[str, Any] = {"url": url, "mode": request.mode}
        attempt = 0
        while True:
            try:
                async with self._semaphore:
                    response = await self._client.post(url, json=body)
                break
            except httpx.TransportError as e:
                if attempt >= self.retries:
                    diagnostic["error"] = repr(e)
                    diagnostic["attempts"] = attempt + 1
                    raise MaskedLMBackendError(
                        f"masked-LM backend unreachable: {e!r}", diagnostic
                    ) from e
                delay = self.backoff * 2**attempt
                logger.warning(
                    "Masked-LM request to %s failed (%r), retrying in %.2fs",
                    url,
                    e,
                    delay,
                )
                await asyncio.sleep(delay)
                attempt += 1

        if not response.is_success:
            diagnostic.update(status=response.status_code, body=response.text[:500])
            raise MaskedLMBackendError(
                f"masked-LM backend answered {response.status_code}", diagnostic
            )
        try:
            return MaskFillResponse.model_validate(response.json())
        except (ValueError, ValidationError) as e:
            diagnostic["body"] = response.text[:500]
            raise MaskedLMBackendError(
                f"malformed masked-LM response: {e}", diagnostic
            ) from e


# -- operations ----------------------------------------------------------------


async def generate_fill_candidates(
    scorer: MaskedLMScorer,
    ctx: MaskedContext,
    cfg: MlmConfig,
    target_lemma: str | None = None,
) -> list[Candidate]:
    """Whole-word fillers of the mask, in the scorer's order."""
    excluded = {normalize(ctx.original)}
    if target_lemma:
        excluded.add(normalize(target_lemma))

    candidates: list[Candidate] = []
    seen: set[str] = set()
    for result in await scorer.generate(ctx, cfg.top_n):
        text = result.text.strip()
        if text.startswith("##"):
            continue
        text = text.lstrip(_SUBWORD_MARKERS)
        key = normalize(text)
        if len(text) < 2 or not text.isalpha() or key in excluded or key in seen:
            continue
        seen.add(key)
        candidates.append(
            Candidate(
                lemma=key,
                surface=text,
                source=ModuleId.MLM,
                module_score=result.log_prob,
            )
        )
    return candidates


async def fill_rank(
    scorer: MaskedLMScorer, ctx: MaskedContext, texts: Sequence[str]
) -> list[ScoredText]:
    """Score texts in the masked slot, best first; ties by text."""
    if not texts:
        return []
    scored = await scorer.score(ctx, list(texts))
    if len(scored) != len(texts):
        raise MaskedLMBackendError(
            f"scorer returned {len(scored)} scores for {len(texts)} texts"
        )
    return sorted(scored, key=lambda s: (-s.log_prob, s.text))


def build_scorer(
    config: AppConfig,
    settings: Settings | None = None,
    transport: httpx.AsyncBaseTransport | None = None,
) -> MaskedLMScorer:
    """Instantiate the backend selected by `mlm.backend`."""
    if settings is not None:
        config = apply_settings(config, settings)
    if config.mlm.backend == "remote":
        return RemoteMaskedLMScorer.from_config(config.mlm, transport=transport)
    return FrequencyStubScorer(load_frequency_lexicon(config.resources.frequency_path))


async def close_scorer(scorer: MaskedLMScorer) -> None:
    """Release the scorer's connections, if it holds any."""
    aclose = getattr(scorer, "aclose", None)
    if aclose is not None:
        await aclose()
