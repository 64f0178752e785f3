"""FastAPI service exposing the measure library to multiple clients.

Run with ``uvicorn depmeter.service:app``.  Validation failures map to HTTP
422 with the error message in the body.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import bivariate, circle, conditional, markov, rand
from .bivariate import ConvexPhi
from .conditional import TripleTable
from .errors import DepmeterError
from .model import DiscreteSupport, JointTable

app = FastAPI(title="depmeter", version="0.1.0")


@app.exception_handler(DepmeterError)
async def depmeter_error_handler(request: Request, exc: DepmeterError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


class TableIn(BaseModel):
    """Dense joint probability matrix with its labels."""

    p: list[list[float]]
    x_labels: list[str]
    y_labels: list[str]
    ordering: str = "numeric"

    def to_table(self) -> JointTable:
        return JointTable(
            np.asarray(self.p),
            DiscreteSupport(tuple(self.x_labels), self.ordering),
            DiscreteSupport(tuple(self.y_labels), self.ordering),
        )


class MeasureSpec(BaseModel):
    measure: str
    alpha: float | None = None
    phi: str = "square"


class MeasureOut(BaseModel):
    measure: str
    alpha: float | None = None
    value: float
    upper_bound: float | None = None
    normalized: float | None = None


class ComputeRequest(BaseModel):
    table: TableIn
    measures: list[MeasureSpec]


class ComputeResponse(BaseModel):
    reports: list[MeasureOut]


@app.post("/compute", response_model=ComputeResponse)
def compute(req: ComputeRequest) -> ComputeResponse:
    t = req.table.to_table()
    reports = []
    for spec in req.measures:
        rep = bivariate.compute(t, spec.measure, spec.alpha, ConvexPhi.parse(spec.phi))
        reports.append(MeasureOut(**rep.to_dict()))
    return ComputeResponse(reports=reports)


class TripleIn(BaseModel):
    p: list[list[list[float]]]
    x_labels: list[str]
    y_labels: list[str]
    z_labels: list[str]
    ordering: str = "numeric"


class ConditionalRequest(BaseModel):
    table: TripleIn


@app.post("/conditional", response_model=MeasureOut)
def conditional_measure(req: ConditionalRequest) -> MeasureOut:
    t = TripleTable(
        np.asarray(req.table.p),
        DiscreteSupport(tuple(req.table.x_labels), req.table.ordering),
        DiscreteSupport(tuple(req.table.y_labels), req.table.ordering),
        DiscreteSupport(tuple(req.table.z_labels), req.table.ordering),
    )
    return MeasureOut(**conditional.tau_conditional_squared(t).to_dict())


class OracleOut(BaseModel):
    n: int
    mi_xy: float
    mi_xz: float
    bhm_xy: float
    bhm_xz: float
    tau2_yx: float
    tau2_xy: float
    tau2_xz: float


@app.get("/example/{n}", response_model=OracleOut)
def example(n: int) -> OracleOut:
    return OracleOut(**circle.oracle(n).to_dict())


class DpiRequest(BaseModel):
    count: int = Field(ge=1, le=10000)
    seed: int = 0
    phi: str = "square"
    max_size: int = Field(default=8, ge=2, le=32)


class DpiResponse(BaseModel):
    chains: int
    violations: int
    min_slack: float


@app.post("/dpi/random", response_model=DpiResponse)
def dpi_random(req: DpiRequest) -> DpiResponse:
    phi = ConvexPhi.parse(req.phi)
    rng = np.random.default_rng(np.uint64(req.seed))
    violations = 0
    min_slack = float("inf")
    for _ in range(req.count):
        m, n, l = (int(v) for v in rng.integers(2, req.max_size + 1, size=3))
        report = markov.check_dpi(rand.random_chain(rng, m, n, l), phi)
        if not (report.holds and report.reverse_holds):
            violations += 1
        min_slack = min(min_slack, report.slack, report.reverse_slack)
    return DpiResponse(chains=req.count, violations=violations, min_slack=min_slack)


class PTestRequest(BaseModel):
    records: list[tuple[str, str]]
    measure: str
    alpha: float | None = None
    permutations: int = Field(default=200, ge=1)
    seed: int = 0


class PTestResponse(BaseModel):
    measure: str
    p_value: float


@app.post("/ptest", response_model=PTestResponse)
def ptest(req: PTestRequest) -> PTestResponse:
    p = bivariate.permutation_pvalue(
        req.records, req.measure, req.permutations, req.seed, req.alpha
    )
    return PTestResponse(measure=req.measure, p_value=p)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}
