from src.shared.telemetry.logging import get_logger, setup_logging
from src.shared.telemetry.tracing import add_span_event, get_trace_id, traced

__all__ = ["add_span_event", "get_logger", "get_trace_id", "setup_logging", "traced"]
