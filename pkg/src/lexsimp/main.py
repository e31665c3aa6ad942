# FastAPI application entry point
# Reference server for the masked-LM wire protocol

import logging
from collections.abc import AsyncIterator
from contextlib import asynccontextmanager

from fastapi import FastAPI
from pydantic import BaseModel

from .api import maskfill
from .config import AppConfig
from .services.masked_lm import MaskedLMScorer, build_scorer, close_scorer

logger = logging.getLogger(__name__)


class HealthResponse(BaseModel):
    """Health check response model."""

    status: str
    scorer: str


def create_app(
    scorer: MaskedLMScorer | None = None, config: AppConfig | None = None
) -> FastAPI:
    """Build the app around `scorer`, or the one `config` selects (stub by default)."""

    @asynccontextmanager
    async def lifespan(app: FastAPI) -> AsyncIterator[None]:
        logger.info("Starting masked-LM endpoint...")
        owned = app.state.scorer is None
        if owned:
            app.state.scorer = build_scorer(config or AppConfig())
        logger.info("Serving scorer %s", type(app.state.scorer).__name__)
        yield
        if owned:
            await close_scorer(app.state.scorer)
        logger.info("Shutdown complete")

    app = FastAPI(
        title="lexsimp maskfill",
        description="Masked-LM generate/score endpoint used by the lexsimp pipeline",
        version="0.1.0",
        lifespan=lifespan,
    )
    # Served even when the lifespan never runs.
    app.state.scorer = scorer
    app.include_router(maskfill.router)

    @app.get("/health", response_model=HealthResponse, operation_id="health")
    async def health() -> HealthResponse:
        """Health check endpoint."""
        current = getattr(app.state, "scorer", None)
        return HealthResponse(
            status="healthy" if current is not None else "starting",
            scorer=type(current).__name__ if current is not None else "none",
        )

    return app
