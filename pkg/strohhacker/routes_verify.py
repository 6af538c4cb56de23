# strohhacker/routes_verify.py
from fastapi import APIRouter, HTTPException

from strohhacker import verify
from strohhacker.errors import StrohhackerError
from strohhacker.routes_thresholds import http_error
from strohhacker.schemas import (
    CheckRequest,
    DiskGrid,
    SharpnessRequest,
    SharpnessResult,
    VerificationReport,
)
from strohhacker.series import MultivalentFunction, PowerSeries

router = APIRouter(prefix="/verify", tags=["verify"])


@router.post("/check", response_model=VerificationReport)
def check_function(body: CheckRequest):
    try:
        case = verify.build_case(body.theorem_id, body.p, body.b, body.level)
        grid = DiskGrid.default(levels=body.levels, angular_count=body.angular_count)
        f = MultivalentFunction(p=body.p, unit=PowerSeries.from_json(body.unit_coeffs))
        return verify.check(f, case, grid, function_id="request")
    except StrohhackerError as err:
        raise http_error(err)
    except ValueError as err:
        raise HTTPException(status_code=422, detail=str(err))


@router.post("/sharpness", response_model=SharpnessResult)
def sharpness(body: SharpnessRequest):
    try:
        case = verify.build_case(body.theorem_id, body.p, body.b, body.level)
        first = 2 if case.fixed_coefficient else 1
        start = verify.warm_start(case, first + body.free_degrees - 1) if body.warm_start else None
        return verify.sharpness_search(case, body.free_degrees, body.budget, body.seed, start)
    except StrohhackerError as err:
        raise http_error(err)
