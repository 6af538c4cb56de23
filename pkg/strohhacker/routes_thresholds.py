# strohhacker/routes_thresholds.py
from fastapi import APIRouter, HTTPException, Query

from strohhacker import thresholds
from strohhacker.errors import Infeasible, StrohhackerError
from strohhacker.schemas import RootQuadruple, TheoremId, ThresholdSpec

router = APIRouter(prefix="/thresholds", tags=["thresholds"])


# ── Helpers ───────────────────────────────────────────
def http_error(err: StrohhackerError) -> HTTPException:
    """Infeasible parameters are a precondition conflict; anything else is a bad request body."""
    if isinstance(err, Infeasible):
        return HTTPException(status_code=409, detail=str(err))
    return HTTPException(status_code=422, detail=f"{type(err).__name__}: {err}")


# ── Bounds ────────────────────────────────────────────
@router.get("/{theorem_id}", response_model=ThresholdSpec)
def get_threshold(
    theorem_id: TheoremId,
    p: int = Query(1, ge=1),
    b: float | None = Query(None, ge=0),
    level: float | None = Query(None, description="beta, gamma or, for LemmaPhi, a"),
):
    try:
        return thresholds.threshold(theorem_id, p, b, level)
    except StrohhackerError as err:
        raise http_error(err)


@router.get("/{theorem_id}/roots", response_model=RootQuadruple)
def get_roots(theorem_id: TheoremId, p: int = Query(1, ge=1), b: float = Query(0.0, ge=0)):
    if theorem_id is not TheoremId.T37:
        raise HTTPException(status_code=404, detail="Root quadruple exists for T37 only")
    try:
        return thresholds.gamma_roots(p, b)
    except StrohhackerError as err:
        raise http_error(err)
