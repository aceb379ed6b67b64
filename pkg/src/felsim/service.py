"""HTTP front door: a FastAPI app wrapping the simulator for multi-client
use (parameter sweeps, dashboards). The CLI and these endpoints drive the
same harness functions; results come back as the CSV texts plus a small
summary.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .harness.config import ConfigError, parse_config, serialize_config
from .harness.metrics import (
    MetricsTable, counters_to_csv, epochs_to_csv, metrics_to_csv,
)
from .harness.runner import SimulationInvariantError, run_scenario
from .harness.scenarios import DEFAULT_DURATION_MS, build_scenario


class ValidateRequest(BaseModel):
    config: str = Field(description="scenario config file text")


class ValidateResponse(BaseModel):
    valid: bool
    error: str | None = None


class RunRequest(BaseModel):
    config: str | None = Field(default=None, description="config file text")
    scenario: str | None = Field(default=None, description="canned scenario: a, b, or c")
    seed: int | None = None
    seeds: list[int] | None = None
    duration_ms: int = DEFAULT_DURATION_MS


class ArmSummary(BaseModel):
    scenario: str
    rows: int
    mean_latency_ms: float


class RunResponse(BaseModel):
    metrics_csv: str
    counters_csv: str
    epochs_csv: str
    summary: list[ArmSummary]


class ScenarioResponse(BaseModel):
    kind: str
    seed: int
    config: str


class HealthResponse(BaseModel):
    status: str
    version: str


app = FastAPI(
    title="felsim",
    description="Deterministic CCN + fog edge-learning simulator",
    version=__version__,
)


def _summarize(table: MetricsTable) -> list[ArmSummary]:
    by_scenario: dict[str, list[int]] = {}
    for row in table.rows:
        by_scenario.setdefault(row.scenario, []).append(row.latency_ms)
    return [
        ArmSummary(
            scenario=scenario,
            rows=len(latencies),
            mean_latency_ms=sum(latencies) / len(latencies),
        )
        for scenario, latencies in sorted(by_scenario.items())
    ]


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/validate", response_model=ValidateResponse)
def validate(request: ValidateRequest) -> ValidateResponse:
    try:
        parse_config(request.config)
    except ConfigError as exc:
        return ValidateResponse(valid=False, error=str(exc))
    return ValidateResponse(valid=True)


@app.get("/scenarios/{kind}", response_model=ScenarioResponse)
def scenario_config(kind: str, seed: int = 1,
                    duration_ms: int = DEFAULT_DURATION_MS) -> ScenarioResponse:
    try:
        config = build_scenario(kind, seed, duration_ms)
    except ValueError as exc:
        raise HTTPException(status_code=404, detail=str(exc))
    return ScenarioResponse(kind=kind, seed=seed, config=serialize_config(config))


@app.post("/run", response_model=RunResponse)
def run(request: RunRequest) -> RunResponse:
    if (request.config is None) == (request.scenario is None):
        raise HTTPException(
            status_code=422, detail="provide exactly one of config or scenario"
        )
    seeds = request.seeds or ([request.seed] if request.seed is not None else [1])
    merged = MetricsTable()
    try:
        for seed in seeds:
            if request.config is not None:
                config = parse_config(request.config)
                merged.extend(run_scenario(config, seed=seed))
            else:
                merged.extend(
                    run_scenario(build_scenario(request.scenario, seed,
                                                request.duration_ms))
                )
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except SimulationInvariantError as exc:
        raise HTTPException(status_code=500, detail=str(exc))
    return RunResponse(
        metrics_csv=metrics_to_csv(merged.rows),
        counters_csv=counters_to_csv(merged.counters),
        epochs_csv=epochs_to_csv(merged.epochs),
        summary=_summarize(merged),
    )
