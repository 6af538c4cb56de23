# strohhacker/routes_admissibility.py
from fastapi import APIRouter

from strohhacker import admissibility
from strohhacker.errors import StrohhackerError
from strohhacker.routes_thresholds import http_error
from strohhacker.schemas import CertifyRequest, SupReport

router = APIRouter(prefix="/admissibility", tags=["admissibility"])


@router.post("/certify", response_model=SupReport)
def certify(body: CertifyRequest):
    try:
        problem = admissibility.make_problem(body.psi_id, body.p, body.b, body.level)
        return admissibility.sup_on_region(problem, body.rho_max, body.samples)
    except StrohhackerError as err:
        raise http_error(err)
