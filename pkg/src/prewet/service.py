"""HTTP service wrapping the run engine and the quick numeric evaluators.

Runs execute on a single worker thread (they are CPU-bound and deterministic;
serializing them keeps replica ordering and file writes race-free).  Each job
gets a directory under the service workspace; clients poll the job state and
download the emitted files, manifest included.
"""

from __future__ import annotations

import math
import threading
import traceback
import uuid
from pathlib import Path
from queue import Queue

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from . import fs
from .runio import RunConfig, TOOL_VERSION
from .runner import run_command

__all__ = ["create_app"]


class RunRequest(BaseModel):
    command: str
    seed: int = 0
    replicas: int = Field(default=1, ge=1)
    out: str | None = None
    options: dict = Field(default_factory=dict)


class JobInfo(BaseModel):
    job_id: str
    state: str                      # queued | running | done | error
    command: str
    out_dir: str
    error: str | None = None


class AiryRequest(BaseModel):
    x: float


class AiryResponse(BaseModel):
    x: float
    value: float
    deriv: float
    method: str


class DensityRequest(BaseModel):
    lam: float = Field(gt=0)
    chi: float = Field(gt=0)
    m_star: float = Field(default=1.0, gt=0, le=1.0)
    r: list[float]


class DensityResponse(BaseModel):
    c: float
    big_c: float
    a0: float
    density: list[float]
    phi0: list[float]


class _JobStore:
    def __init__(self, workspace: Path):
        self.workspace = workspace
        self.jobs: dict[str, JobInfo] = {}
        self.queue: Queue = Queue()
        self.lock = threading.Lock()
        self.worker = threading.Thread(target=self._loop, daemon=True)
        self.worker.start()

    def submit(self, req: RunRequest) -> JobInfo:
        job_id = uuid.uuid4().hex[:12]
        out = req.out or str(self.workspace / job_id)
        cfg = RunConfig(command=req.command, seed=req.seed, replicas=req.replicas,
                        out=out, options=dict(req.options))
        info = JobInfo(job_id=job_id, state="queued", command=req.command, out_dir=out)
        with self.lock:
            self.jobs[job_id] = info
        self.queue.put((job_id, cfg))
        return info

    def _loop(self):
        while True:
            job_id, cfg = self.queue.get()
            with self.lock:
                self.jobs[job_id].state = "running"
            try:
                run_command(cfg)
                with self.lock:
                    self.jobs[job_id].state = "done"
            except Exception as exc:  # noqa: BLE001 - job errors are reported, not raised
                with self.lock:
                    self.jobs[job_id].state = "error"
                    self.jobs[job_id].error = f"{type(exc).__name__}: {exc}"
                traceback.print_exc()


def create_app(workspace: str | Path = "runs") -> FastAPI:
    workspace = Path(workspace)
    workspace.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="prewet", version=TOOL_VERSION)
    store = _JobStore(workspace)

    @app.get("/health")
    def health():
        return {"status": "ok", "version": TOOL_VERSION}

    @app.post("/eval/airy", response_model=AiryResponse)
    def eval_airy(req: AiryRequest):
        try:
            ev = fs.airy(req.x)
        except fs.AccuracyRangeError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return AiryResponse(x=req.x, value=ev.value, deriv=ev.deriv, method=ev.method)

    @app.post("/eval/fs-density", response_model=DensityResponse)
    def eval_density(req: DensityRequest):
        c = 2.0 * req.lam * req.m_star * math.sqrt(req.chi)
        params = fs.FSParams(c=c)
        dens = fs.stationary_density(params)
        phi0, a0 = fs.ground_state(params)
        return DensityResponse(c=c, big_c=params.big_c, a0=a0,
                               density=[float(dens(r)) for r in req.r],
                               phi0=[float(phi0.normalized(r)) for r in req.r])

    @app.post("/runs/{command}", response_model=JobInfo)
    def submit_run(command: str, req: RunRequest):
        if command != req.command:
            raise HTTPException(status_code=422, detail="path/body command mismatch")
        try:
            return store.submit(req)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.get("/runs/{job_id}", response_model=JobInfo)
    def job_status(job_id: str):
        info = store.jobs.get(job_id)
        if info is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return info

    @app.get("/runs/{job_id}/files")
    def job_files(job_id: str):
        info = store.jobs.get(job_id)
        if info is None:
            raise HTTPException(status_code=404, detail="unknown job")
        if info.state != "done":
            raise HTTPException(status_code=409, detail=f"job is {info.state}")
        names = sorted(p.name for p in Path(info.out_dir).iterdir() if p.is_file())
        return {"files": names}

    @app.get("/runs/{job_id}/files/{name}", response_class=PlainTextResponse)
    def job_file(job_id: str, name: str):
        info = store.jobs.get(job_id)
        if info is None:
            raise HTTPException(status_code=404, detail="unknown job")
        path = Path(info.out_dir) / name
        if "/" in name or not path.exists():
            raise HTTPException(status_code=404, detail="unknown file")
        return path.read_text(encoding="utf-8")

    return app
