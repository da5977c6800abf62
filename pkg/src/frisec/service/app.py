"""FastAPI application wrapping the simulation harness.

Sweeps can take minutes, so they run as background jobs held in an
in-memory registry; single trials are served synchronously.
"""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

import frisec
from frisec import harness
from frisec.schemes import ALL_SCHEMES
from frisec.service import models


class _Job:
    def __init__(self, config: harness.ExperimentConfig):
        self.id = uuid.uuid4().hex
        self.config = config
        self.state = "pending"
        self.result: harness.SweepResult | None = None
        self.detail: str | None = None


class JobStore:
    def __init__(self):
        self._jobs: dict[str, _Job] = {}
        self._lock = threading.Lock()

    def create(self, config: harness.ExperimentConfig) -> _Job:
        job = _Job(config)
        with self._lock:
            self._jobs[job.id] = job
        return job

    def get(self, job_id: str) -> _Job:
        with self._lock:
            job = self._jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no such job: {job_id}")
        return job


def _run_job(job: _Job) -> None:
    job.state = "running"
    try:
        job.result = harness.run_sweep(job.config)
        job.state = "done"
    except Exception as exc:
        job.state = "error"
        job.detail = str(exc)


def _validate_schemes(schemes) -> tuple:
    for s in schemes:
        if s not in ALL_SCHEMES:
            raise HTTPException(status_code=422, detail=f"unknown scheme: {s}")
    if not schemes:
        raise HTTPException(status_code=422, detail="at least one scheme is required")
    return tuple(schemes)


def create_app() -> FastAPI:
    app = FastAPI(
        title="frisec",
        description="Secrecy-rate simulation for fluid reflecting surfaces",
        version=frisec.__version__,
    )
    jobs = JobStore()

    @app.get("/health", response_model=models.HealthResponse)
    def health():
        return models.HealthResponse(status="ok", version=frisec.__version__)

    @app.get("/presets", response_model=models.PresetsResponse)
    def presets():
        rows = [
            models.PresetModel(
                name=name,
                sweep_variable=variable,
                sweep_values=list(grid),
                default_trials=harness.PRESET_DEFAULT_TRIALS,
            )
            for name, (variable, grid) in harness.PRESETS.items()
        ]
        return models.PresetsResponse(presets=rows)

    @app.post("/trials", response_model=models.TrialResponse)
    def run_trial(req: models.TrialRequest):
        schemes = _validate_schemes(req.schemes)
        if req.n_hat > req.n:
            raise HTTPException(status_code=422, detail="n_hat cannot exceed n")
        config = harness.ExperimentConfig(
            m=req.m, n=req.n, n_hat=req.n_hat, b=req.b,
            p_ap_dbm=req.p_ap_dbm, trials=1, base_seed=req.seed,
            schemes=schemes, sweep_variable="power",
            sweep_values=(req.p_ap_dbm,),
        )
        records = harness.run_trial(config, req.p_ap_dbm, req.trial)
        return models.TrialResponse(
            seed=req.seed,
            trial=req.trial,
            outcomes=[
                models.SchemeOutcome(
                    scheme=r.scheme,
                    secrecy_rate_bps_hz=r.secrecy_rate,
                    objective_ratio=r.objective_ratio,
                    ao_iters=r.ao_iters,
                )
                for r in records
            ],
        )

    @app.post("/sweeps", response_model=models.JobCreated, status_code=202)
    def launch_sweep(req: models.SweepRequest):
        schemes = _validate_schemes(req.schemes)
        try:
            config = harness.ExperimentConfig(
                m=req.m, n=req.n, n_hat=req.n_hat, b=req.b,
                p_ap_dbm=req.p_ap_dbm, trials=req.trials,
                base_seed=req.seed, schemes=schemes,
                sweep_variable=req.sweep_variable,
                sweep_values=tuple(req.sweep_values),
                threads=req.threads,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        job = jobs.create(config)
        thread = threading.Thread(target=_run_job, args=(job,), daemon=True)
        thread.start()
        return models.JobCreated(job_id=job.id, state=job.state)

    def _status(job: _Job) -> models.JobStatus:
        status = models.JobStatus(
            job_id=job.id,
            state=job.state,
            sweep_variable=job.config.sweep_variable,
            detail=job.detail,
        )
        if job.result is not None:
            status.num_records = len(job.result.records)
            status.summaries = [
                models.SummaryRowModel(
                    sweep_value=s.sweep_value, scheme=s.scheme,
                    mean_rate=s.mean_rate, std_error=s.std_error, trials=s.trials)
                for s in job.result.summaries
            ]
            status.errors = [
                models.PointErrorModel(sweep_value=e.sweep_value, message=e.message)
                for e in job.result.errors
            ]
        return status

    @app.get("/sweeps/{job_id}", response_model=models.JobStatus)
    def sweep_status(job_id: str):
        return _status(jobs.get(job_id))

    @app.get("/sweeps/{job_id}/records", response_model=models.RecordsResponse)
    def sweep_records(job_id: str):
        job = jobs.get(job_id)
        if job.state != "done" or job.result is None:
            raise HTTPException(status_code=409, detail=f"job is {job.state}, not done")
        return models.RecordsResponse(
            job_id=job.id,
            records=[
                models.RecordModel(
                    sweep_value=r.sweep_value, trial=r.trial, scheme=r.scheme,
                    secrecy_rate_bps_hz=r.secrecy_rate,
                    objective_ratio=r.objective_ratio,
                    ao_iters=r.ao_iters, wall_ms=r.wall_ms, seed=r.seed)
                for r in job.result.records
            ],
        )

    @app.get("/sweeps/{job_id}/csv", response_class=PlainTextResponse)
    def sweep_csv(job_id: str):
        job = jobs.get(job_id)
        if job.state != "done" or job.result is None:
            raise HTTPException(status_code=409, detail=f"job is {job.state}, not done")
        return harness.records_to_csv_text(
            job.result.records, job.config.sweep_variable)

    return app


app = create_app()
