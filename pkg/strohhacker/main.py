from contextlib import asynccontextmanager

from fastapi import FastAPI

from strohhacker.config import TOOL_VERSION, configure_logging
from strohhacker.routes_admissibility import router as admissibility_router
from strohhacker.routes_thresholds import router as thresholds_router
from strohhacker.routes_verify import router as verify_router


@asynccontextmanager
async def lifespan(app: FastAPI):
    configure_logging()
    yield


app = FastAPI(
    title="Strohhacker",
    description="Marx-Strohhäcker type thresholds, admissibility certificates and implication checks",
    version=TOOL_VERSION,
    lifespan=lifespan,
)

app.include_router(thresholds_router)
app.include_router(admissibility_router)
app.include_router(verify_router)


@app.get("/health")
async def health():
    return {"status": "ok", "version": TOOL_VERSION}
