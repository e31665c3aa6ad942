"""Masked-LM wire endpoint (POST /v1/maskfill)"""

from fastapi import APIRouter, Depends, HTTPException, Request

from ..errors import MaskedLMBackendError
from ..models.wire import MaskFillRequest, MaskFillResponse, MaskFillResult
from ..services.masked_lm import MaskedContext, MaskedLMScorer

router = APIRouter(prefix="/v1", tags=["maskfill"])


async def get_scorer(request: Request) -> MaskedLMScorer:
    """Get the scorer from app state

    Raises:
        HTTPException: If the scorer has not been initialized
    """
    scorer = getattr(request.app.state, "scorer", None)
    if scorer is None:
        raise HTTPException(status_code=500, detail="Scorer not initialized")
    return scorer


@router.post("/maskfill", response_model=MaskFillResponse, operation_id="maskfill")
async def maskfill(
    request: MaskFillRequest, scorer: MaskedLMScorer = Depends(get_scorer)
) -> MaskFillResponse:
    """Generate fillers for, or score candidates in, the masked slot

    Args:
        request: Left/right context and either top_n (generate) or candidates (score)
        scorer: Injected scorer

    Raises:
        HTTPException: 400 for unusable candidates, 500 when the scorer fails
    """
    ctx = MaskedContext(left=request.left, right=request.right, original="")
    try:
        if request.mode == "generate":
            assert request.top_n is not None
            scored = await scorer.generate(ctx, request.top_n)
        else:
            candidates = request.candidates or []
            if any(not c.strip() for c in candidates):
                raise HTTPException(status_code=400, detail="Empty candidate text")
            scored = await scorer.score(ctx, candidates)
    except HTTPException:
        raise
    except (MaskedLMBackendError, ValueError) as e:
        raise HTTPException(status_code=500, detail=f"Scoring failed: {e}") from e
    return MaskFillResponse(
        results=[MaskFillResult(text=s.text, log_prob=s.log_prob) for s in scored]
    )
