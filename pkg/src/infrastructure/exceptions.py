"""
Infrastructure exceptions for the MedFACT pipeline.

This module defines infrastructure-level exceptions related to
cohort files, artifact storage and checkpoint decoding.
"""

from src.domain.exceptions import MedfactException


class DataFormatError(MedfactException):
    """A cohort file does not follow the pipe-separated layout or schema."""

    def __init__(self, file_path: str, reason: str, column: str | None = None, line: int | None = None):
        location = f"{file_path}" + (f":{line}" if line is not None else "")
        details: dict = {"file_path": file_path, "reason": reason}
        if column is not None:
            details["column"] = column
        if line is not None:
            details["line"] = line
        super().__init__(f"{location}: {reason}", "DATA_FORMAT_ERROR", details)


# Artifact Exceptions
class ArtifactException(MedfactException):
    """Base exception for artifact storage operations."""

    pass


class ArtifactNotFoundError(ArtifactException):
    """Artifact file not found."""

    def __init__(self, file_path: str):
        super().__init__(
            f"Artifact not found: {file_path}",
            "ARTIFACT_NOT_FOUND",
            {"file_path": file_path},
        )


class ArtifactWriteError(ArtifactException):
    """Artifact write failed."""

    def __init__(self, file_path: str, reason: str):
        super().__init__(
            f"Failed to write artifact: {file_path}",
            "ARTIFACT_WRITE_ERROR",
            {"file_path": file_path, "reason": reason},
        )


class ArtifactChecksumMismatchError(ArtifactException):
    """Checksum validation failed - artifact corrupted or edited."""

    def __init__(self, file_path: str, expected: str, actual: str):
        super().__init__(
            f"Checksum mismatch for artifact: {file_path}",
            "ARTIFACT_CHECKSUM_ERROR",
            {"file_path": file_path, "expected": expected, "actual": actual},
        )


class CheckpointFormatError(ArtifactException):
    """Checkpoint content does not match the checkpoint schema."""

    def __init__(self, file_path: str, reason: str):
        super().__init__(
            f"Invalid checkpoint {file_path}: {reason}",
            "CHECKPOINT_FORMAT_ERROR",
            {"file_path": file_path, "reason": reason},
        )
