"""
Artifact storage protocol.

Use cases write checkpoints, reports and exports through this interface,
so the filesystem layout stays an infrastructure concern.
"""

from pathlib import Path
from typing import Any, Protocol


class IArtifactStore(Protocol):
    """
    Protocol for artifact storage backends.

    Implementations:
    - LocalArtifactStore: filesystem storage with atomic writes
    """

    def path(self, ref: str) -> Path:
        """Resolved location of an artifact"""
        ...

    def exists(self, ref: str) -> bool:
        ...

    def write_json(self, ref: str, data: Any) -> str:
        """
        Write a JSON artifact atomically.

        Returns:
            SHA-256 checksum of the written file
        """
        ...

    def write_text(self, ref: str, text: str) -> str:
        ...

    def read_json(self, ref: str) -> Any:
        """
        Raises:
            ArtifactNotFoundError: If the artifact doesn't exist
        """
        ...

    def read_text(self, ref: str) -> str:
        ...
