"""Utility functions and decorators for tracing pipeline stages"""

from collections.abc import Callable
from functools import wraps
from typing import Any, TypeVar

from opentelemetry import trace
from opentelemetry.trace import Status, StatusCode

F = TypeVar("F", bound=Callable[..., Any])

_SCALAR_TYPES = (str, int, float, bool)


def traced(operation_name: str | None = None, attributes: dict | None = None) -> Callable[[F], F]:
    """
    Decorator to run a function inside a span

    Usage:
        @traced("medfact.train")
        def train(splits, config):
            ...

    Scalar keyword arguments are recorded as `arg.<name>` attributes.

    Args:
        operation_name: Name of the operation (defaults to module.function)
        attributes: Additional attributes to add to the span
    """

    def decorator(func: F) -> F:
        @wraps(func)
        def wrapper(*args, **kwargs):
            tracer = trace.get_tracer(__name__)
            span_name = operation_name or f"{func.__module__}.{func.__name__}"

            with tracer.start_as_current_span(span_name) as span:
                if attributes:
                    for key, value in attributes.items():
                        span.set_attribute(key, value)

                for key, value in kwargs.items():
                    if not key.startswith("_") and isinstance(value, _SCALAR_TYPES):
                        span.set_attribute(f"arg.{key}", value)

                try:
                    result = func(*args, **kwargs)
                    span.set_status(Status(StatusCode.OK))
                    return result
                except Exception as e:
                    span.set_status(Status(StatusCode.ERROR, str(e)))
                    span.record_exception(e)
                    raise

        return wrapper  # type: ignore[return-value]

    return decorator


def add_span_event(name: str, attributes: dict | None = None) -> None:
    """
    Add an event to the current span

    Usage:
        add_span_event("epoch_completed", {"epoch": 3, "loss": 0.41})
    """
    span = trace.get_current_span()
    if span:
        span.add_event(name, attributes=attributes or {})


def get_trace_id() -> str | None:
    """Current trace ID as a 32-char hex string, or None outside a recording span"""
    span = trace.get_current_span()
    context = span.get_span_context() if span else None
    if context and context.is_valid:
        return format(context.trace_id, "032x")
    return None
