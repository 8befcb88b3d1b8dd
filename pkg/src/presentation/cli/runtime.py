"""
Process-level plumbing shared by every command: logging and tracing setup,
run manifests and the exception -> exit code mapping.
"""

import json
import sys
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from functools import wraps
from typing import Any, TypeVar

import typer
from pydantic import BaseModel

from src.application.dtos.config import RunManifest
from src.application.interfaces.storage import IArtifactStore
from src.domain.exceptions import (
    ConfigValidationError,
    ContractError,
    MedfactException,
    MetricUndefinedError,
    NumericDivergenceError,
    PreprocessingError,
    ShapeError,
    SplitError,
    ValidationException,
)
from src.infrastructure.config.settings import get_settings
from src.infrastructure.exceptions import ArtifactException, DataFormatError
from src.shared.telemetry.logging import get_logger, setup_logging
from src.shared.telemetry.telemetry import TelemetryConfig, get_telemetry, set_telemetry
from src.shared.telemetry.tracing import get_trace_id
from src.shared.utils import generate_run_id, utc_now

logger = get_logger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_DIVERGENCE = 4

_VALIDATION_FAMILY = (
    ValidationException,
    ConfigValidationError,
    ContractError,
    ShapeError,
    PreprocessingError,
    SplitError,
    MetricUndefinedError,
    DataFormatError,
)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, NumericDivergenceError):
        return EXIT_DIVERGENCE
    if isinstance(exc, _VALIDATION_FAMILY):
        return EXIT_VALIDATION
    if isinstance(exc, (ArtifactException, OSError)):
        return EXIT_IO
    return EXIT_UNEXPECTED


def error_payload(exc: BaseException) -> dict[str, Any]:
    if isinstance(exc, MedfactException):
        return exc.to_dict()
    if isinstance(exc, OSError):
        return {"error": "IO_ERROR", "message": str(exc), "details": {"filename": exc.filename}}
    return {"error": "INTERNAL_ERROR", "message": str(exc), "details": {"type": type(exc).__name__}}


@contextmanager
def command_runtime() -> Iterator[None]:
    """Initialize logging and, when enabled, tracing around one command"""
    settings = get_settings()
    setup_logging()

    if settings.telemetry_enabled:
        try:
            telemetry = TelemetryConfig(
                service_name=settings.app_name,
                service_version=settings.app_version,
                enabled=True,
            )
            telemetry.setup_telemetry(
                exporter_type=settings.telemetry_exporter,
                otlp_endpoint=settings.telemetry_otlp_endpoint,
                sample_rate=settings.telemetry_sample_rate,
                environment=settings.telemetry_environment,
            )
            telemetry.instrument_logging()
            set_telemetry(telemetry)
        except Exception as e:
            logger.warning("Telemetry initialization failed: %s. Continuing without tracing.", e)

    try:
        yield
    finally:
        telemetry_instance = get_telemetry()
        if telemetry_instance:
            try:
                telemetry_instance.shutdown()
            except Exception as e:
                logger.warning("Error during telemetry shutdown: %s", e)
            set_telemetry(None)


def handle_errors(func: F) -> F:
    """Run a command inside the runtime; print failures as one JSON line and exit non-zero"""

    @wraps(func)
    def wrapper(*args, **kwargs):
        with command_runtime():
            try:
                return func(*args, **kwargs)
            except typer.Exit:
                raise
            except Exception as exc:
                code = exit_code_for(exc)
                if code == EXIT_UNEXPECTED:
                    logger.exception("Unexpected error")
                else:
                    logger.error("%s", exc)
                sys.stderr.write(json.dumps(error_payload(exc), default=str) + "\n")
                raise typer.Exit(code) from exc

    return wrapper  # type: ignore[return-value]


def write_manifest(
    store: IArtifactStore,
    command: str,
    config: BaseModel | dict[str, Any],
    *,
    seed: int | None,
    outputs: dict[str, str],
    inputs: dict[str, Any] | None = None,
) -> RunManifest:
    """Record what a command did next to its outputs"""
    resolved = config.model_dump(mode="json") if isinstance(config, BaseModel) else dict(config)
    manifest = RunManifest(
        run_id=generate_run_id(),
        created_at=utc_now(),
        command=command,
        config={**resolved, **({"inputs": inputs} if inputs else {})},
        seed=seed,
        outputs=outputs,
        trace_id=get_trace_id(),
    )
    store.write_json("manifest.json", manifest.model_dump(mode="json"))
    return manifest
