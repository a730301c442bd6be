"""FastAPI application exposing the verification suite over HTTP."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import StructuralFailureError, SymconeError
from . import handlers, models


def create_app() -> FastAPI:
    app = FastAPI(
        title="symcone",
        description=(
            "Euclidean Jordan algebra kernels, quadratic-form splitting, and "
            "Monte Carlo verification of Wishart conditional-expectation "
            "identities."
        ),
        version="0.1.0",
    )

    @app.exception_handler(SymconeError)
    async def _domain_error(request: Request, exc: SymconeError):
        status = 500 if isinstance(exc, StructuralFailureError) else 422
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/info", response_model=models.InfoResponse)
    def info(req: models.InfoRequest):
        return handlers.run_info(req)

    @app.post("/check-identities", response_model=models.CheckIdentitiesResponse)
    def check_identities(req: models.CheckIdentitiesRequest):
        return handlers.run_check_identities(req)

    @app.post("/verify", response_model=models.VerifyResponse)
    def verify(req: models.VerifyRequest):
        return handlers.run_verify(req)

    @app.post("/recover", response_model=models.RecoverResponse)
    def recover(req: models.RecoverRequest):
        return handlers.run_recover(req)

    @app.get("/dims-table", response_model=models.DimsTableResponse)
    def dims_table():
        return handlers.run_dims_table()

    return app


app = create_app()
