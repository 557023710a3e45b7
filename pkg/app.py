"""
FastAPI service exposing scenario evolution, sweeps and validation.
"""

import asyncio
import json
import logging
import os
import sys
import time
from contextlib import asynccontextmanager
from typing import Optional

import psutil
import uvicorn
from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from sse_starlette.sse import EventSourceResponse

# Add current directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from evolver import QuenchEvolver, get_evolver
from exceptions import ConfigError, NumericError, QuenchDynamicsError
from figures import FIGURE_PRESETS
from logging_config import configure_logging
from models import (
    EvolveResponse,
    HealthStatus,
    ScenarioConfig,
    SweepRequest,
    SweepResult,
    ValidationReport
)
from settings import settings
from validation import run_validate

logger = logging.getLogger(__name__)

VERSION = "1.0.0"

_evolver: Optional[QuenchEvolver] = None
_start_time: float = time.time()


def get_evolver_instance() -> QuenchEvolver:
    """Get evolver singleton."""
    global _evolver
    if _evolver is None:
        _evolver = get_evolver()
    return _evolver


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan handler."""
    global _start_time
    _start_time = time.time()
    configure_logging(settings.log_level, settings.log_format, settings.logs_dir)
    logger.info("Starting quench dynamics service...")
    get_evolver_instance()
    yield
    logger.info("Shutting down quench dynamics service...")
    if _evolver is not None:
        _evolver.close()


app = FastAPI(
    title="Quench Dynamics Service",
    description="Entanglement, mixedness and uncertainty of quenched coupled oscillators in a magnetic field",
    version=VERSION,
    lifespan=lifespan,
    docs_url="/docs",
    redoc_url="/redoc"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# =====================================================================
# Exception Handlers
# =====================================================================

@app.exception_handler(RequestValidationError)
async def validation_exception_handler(request, exc):
    """Handle request validation errors."""
    errors = []
    for error in exc.errors():
        errors.append({
            "field": ".".join(str(loc) for loc in error["loc"]),
            "message": error["msg"],
            "type": error["type"]
        })
    return JSONResponse(
        status_code=422,
        content={
            "error": "VALIDATION_ERROR",
            "message": "Request validation failed",
            "details": {"errors": errors}
        }
    )


@app.exception_handler(QuenchDynamicsError)
async def quench_exception_handler(request, exc: QuenchDynamicsError):
    """Config errors are the caller's fault; numeric failures are ours."""
    status_code = 422 if isinstance(exc, ConfigError) else 500
    if isinstance(exc, NumericError):
        logger.error(f"Numeric failure: {exc.message}")
    return JSONResponse(status_code=status_code, content=exc.to_dict())


@app.exception_handler(Exception)
async def general_exception_handler(request, exc):
    """Handle general exceptions."""
    logger.error(f"Unhandled exception: {exc}", exc_info=True)
    return JSONResponse(
        status_code=500,
        content={
            "error": "INTERNAL_ERROR",
            "message": str(exc)
        }
    )


# =====================================================================
# System Endpoints
# =====================================================================

@app.get("/", tags=["System"])
async def root():
    """API information."""
    return {
        "name": "Quench Dynamics Service",
        "version": VERSION,
        "status": "running",
        "endpoints": {
            "health": "/health",
            "settings": "/settings",
            "evolve": "/evolve",
            "evolve_stream": "/evolve/stream",
            "sweep": "/sweep",
            "validate": "/validate",
            "figures": "/figures/{number}",
        }
    }


@app.get("/health", response_model=HealthStatus, tags=["System"])
async def health_check():
    """Service health with process memory."""
    process = psutil.Process()
    memory_mb = process.memory_info().rss / (1024 * 1024)
    evolver = get_evolver_instance()
    return HealthStatus(
        status="healthy",
        version=VERSION,
        uptime_seconds=time.time() - _start_time,
        memory_usage_mb=round(memory_mb, 2),
        max_workers=evolver.max_workers,
    )


@app.get("/settings", tags=["System"])
async def get_settings():
    """Current numeric and output settings."""
    return settings.model_dump()


# =====================================================================
# Evolution Endpoints
# =====================================================================

@app.post("/evolve", response_model=EvolveResponse, tags=["Dynamics"])
async def evolve(config: ScenarioConfig):
    """Evolve one scenario and return every record."""
    start = time.perf_counter()
    records = await asyncio.to_thread(get_evolver_instance().run_evolve, config)
    return EvolveResponse(
        records=records,
        n_records=len(records),
        diverged=any(r.diverged for r in records),
        runtime_ms=round((time.perf_counter() - start) * 1000.0, 2),
    )


@app.post("/evolve/stream", tags=["Dynamics"])
async def evolve_stream(config: ScenarioConfig):
    """Stream records as server-sent events, one per sample time."""
    evolver = get_evolver_instance()
    modes = evolver.check_quench(config)

    def record_at(t: float):
        return evolver.to_record(evolver.evaluate(config, t, modes), config.entropy_units)

    async def event_generator():
        for t in evolver.sample_times(config):
            try:
                record = await asyncio.to_thread(record_at, float(t))
            except QuenchDynamicsError as e:
                logger.warning(f"Stream stopped at t={t:g}: {e.code}")
                yield {"event": "error", "data": json.dumps(e.to_dict())}
                return
            yield {"event": "record", "data": record.model_dump_json()}
        yield {"event": "done", "data": json.dumps({"n_records": config.n_samples})}

    return EventSourceResponse(event_generator())


@app.post("/sweep", response_model=SweepResult, tags=["Dynamics"])
async def sweep(request: SweepRequest):
    """One evolution per value; failed values carry an error code."""
    return await asyncio.to_thread(
        get_evolver_instance().run_sweep, request.config, request.axis, request.values
    )


@app.get("/figures/{number}", tags=["Dynamics"])
async def figure_preset(number: int):
    """Scenario and sweep parameters of one figure preset."""
    preset = FIGURE_PRESETS.get(number)
    if preset is None:
        raise HTTPException(status_code=404, detail=f"No figure {number}; choose from {sorted(FIGURE_PRESETS)}")
    return {
        "number": preset.number,
        "title": preset.title,
        "axis": preset.axis.value,
        "values": list(preset.values),
        "config": preset.config().to_mapping(),
    }


@app.get("/validate", response_model=ValidationReport, tags=["Validation"])
async def validate():
    """Run the full validation suite."""
    return await asyncio.to_thread(run_validate)


if __name__ == "__main__":
    uvicorn.run(
        "app:app",
        host=settings.host,
        port=settings.port,
        log_level=settings.log_level.lower(),
    )
