"""Logging configuration for MedFACT"""

import logging
import sys

from src.infrastructure.config.settings import get_settings


def setup_logging() -> None:
    """Configure process-wide logging; diagnostics go to stderr so reports own stdout"""
    settings = get_settings()
    log_level = logging.DEBUG if settings.debug else getattr(logging, settings.log_level.upper(), logging.INFO)

    logging.basicConfig(
        level=log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def get_logger(name: str) -> logging.Logger:
    """Get logger for module"""
    return logging.getLogger(name)
