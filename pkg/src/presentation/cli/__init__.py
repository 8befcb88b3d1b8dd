"""Command-line presentation layer"""

from src.presentation.cli.app import app

__all__ = ["app"]
