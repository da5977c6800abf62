"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field

from frisec.schemes import ALL_SCHEMES


class HealthResponse(BaseModel):
    status: str
    version: str


class SchemeOutcome(BaseModel):
    scheme: str
    secrecy_rate_bps_hz: float
    objective_ratio: float
    ao_iters: int


class TrialRequest(BaseModel):
    """One channel realization pushed through the requested schemes."""

    m: int = Field(default=4, ge=1)
    n: int = Field(default=100, ge=2)
    n_hat: int = Field(default=16, ge=1)
    b: int = Field(default=3, ge=1)
    p_ap_dbm: float = 20.0
    seed: int = Field(default=1, ge=0)
    trial: int = Field(default=0, ge=0)
    schemes: list[str] = Field(default_factory=lambda: list(ALL_SCHEMES))


class TrialResponse(BaseModel):
    seed: int
    trial: int
    outcomes: list[SchemeOutcome]


class SweepRequest(BaseModel):
    """Launch a Monte Carlo sweep as a background job."""

    sweep_variable: str = "power"
    sweep_values: list[float] = Field(default_factory=lambda: [20.0], min_length=1)
    trials: int = Field(default=10, ge=1)
    seed: int = Field(default=1, ge=0)
    schemes: list[str] = Field(default_factory=lambda: list(ALL_SCHEMES))
    m: int = Field(default=4, ge=1)
    n: int = Field(default=100, ge=2)
    n_hat: int = Field(default=16, ge=1)
    b: int = Field(default=3, ge=1)
    p_ap_dbm: float = 20.0
    threads: int = Field(default=1, ge=1)


class JobCreated(BaseModel):
    job_id: str
    state: str


class SummaryRowModel(BaseModel):
    sweep_value: float
    scheme: str
    mean_rate: float
    std_error: float
    trials: int


class PointErrorModel(BaseModel):
    sweep_value: float
    message: str


class JobStatus(BaseModel):
    job_id: str
    state: str  # pending | running | done | error
    sweep_variable: str
    num_records: int = 0
    summaries: list[SummaryRowModel] = Field(default_factory=list)
    errors: list[PointErrorModel] = Field(default_factory=list)
    detail: str | None = None


class RecordModel(BaseModel):
    sweep_value: float
    trial: int
    scheme: str
    secrecy_rate_bps_hz: float
    objective_ratio: float
    ao_iters: int
    wall_ms: float
    seed: int


class RecordsResponse(BaseModel):
    job_id: str
    records: list[RecordModel]


class PresetModel(BaseModel):
    name: str
    sweep_variable: str
    sweep_values: list[float]
    default_trials: int


class PresetsResponse(BaseModel):
    presets: list[PresetModel]
