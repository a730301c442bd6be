"""Pydantic request/response models for the HTTP service and the CLI.

Every request model is a full run configuration: a run is reproducible
from the serialized request alone (sigma and theta grids are specified
symbolically, randomness only through explicit seeds).
"""

from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

AlgebraName = Literal["sym", "herm", "quat", "spin", "albert"]


class AlgebraSelector(BaseModel):
    model_config = ConfigDict(extra="forbid")

    algebra: AlgebraName
    rank: Optional[int] = Field(default=None, ge=1)
    ambient: Optional[int] = Field(default=None, ge=2, description="dim E, spin only")


class InfoRequest(AlgebraSelector):
    pass


class InfoResponse(BaseModel):
    kind: AlgebraName
    rank: int
    peirce_d: int
    dim: int
    ambient: Optional[int]
    dim_component1: int
    dim_component2: int
    split_trace_numeric: float
    split_trace_closed: float
    gyndikin_discrete: List[float]
    gyndikin_continuous_above: float


class CheckIdentitiesRequest(AlgebraSelector):
    seed: int = 0


class CheckRow(BaseModel):
    name: str
    max_error: float
    tolerance: float
    count: int
    passed: bool


class CaseTableRow(BaseModel):
    count: int
    expected_count: int
    mean_value: float
    expected_value: float
    max_abs_dev: float


class CheckIdentitiesResponse(BaseModel):
    config: CheckIdentitiesRequest
    kind: AlgebraName
    rank: int
    peirce_d: int
    dim: int
    dim_component1: int
    dim_component2: int
    split_trace_numeric: float
    split_trace_closed: float
    case_table: dict[str, CaseTableRow]
    checks: List[CheckRow]
    passed: bool


class VerifyRequest(AlgebraSelector):
    p: float
    p_prime: float
    sigma: str = "identity"
    samples: int = Field(default=200_000, ge=100)
    seed: int = 42
    theta_scales: List[float] = Field(default=[0.05, 0.10, 0.15, 0.20, 0.25])
    z_threshold: float = 4.0
    diff_checks: int = Field(default=10, ge=1)


class VerificationRowModel(BaseModel):
    test_function: str
    lhs: float
    rhs: float
    std_error: Optional[float] = None
    z_score: Optional[float] = None
    rel_err: Optional[float] = None


class VerificationReportModel(BaseModel):
    identity: str
    constants: dict[str, float]
    n_samples: Optional[int]
    seed: Optional[int]
    z_threshold: Optional[float]
    rel_tol: Optional[float]
    streams: Optional[dict]
    rows: List[VerificationRowModel]
    passed: bool


class LaplaceRowModel(BaseModel):
    theta: str
    empirical: float
    exact: float
    std_error: float
    z_score: float


class LaplaceReportModel(BaseModel):
    algebra: str
    p: float
    sigma: List[float]
    n_samples: int
    seed: int
    z_threshold: float
    streams: dict
    laplace_grid: List[LaplaceRowModel]
    passed: bool


class VerifyResponse(BaseModel):
    config: VerifyRequest
    constants: dict[str, float]
    sampler_gates: List[LaplaceReportModel]
    reports: List[VerificationReportModel]
    passed: bool


class RecoverRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    a: float
    b1: float
    b2: float
    n: int = Field(ge=3)


class KindCandidate(BaseModel):
    kind: AlgebraName
    ambient: Optional[int] = None


class RecoverResponse(BaseModel):
    config: RecoverRequest
    peirce_d_raw: float
    rank_raw: float
    peirce_d: int
    rank: int
    kinds: List[KindCandidate]


class DimsTableRow(BaseModel):
    kind: AlgebraName
    rank: int
    ambient: Optional[int]
    peirce_d: int
    dim: int
    endo_dim: int
    dim_component1: int
    dim_component2: int
    split_trace_closed: float


class DimsTableResponse(BaseModel):
    rows: List[DimsTableRow]
