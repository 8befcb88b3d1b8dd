"""
Local filesystem artifact store.

Features:
- Path traversal protection (resolve + prefix validation)
- Atomic writes (temp file + atomic rename)
- SHA-256 checksum of every written file
"""

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any

from src.infrastructure.exceptions import ArtifactNotFoundError, ArtifactWriteError
from src.shared.telemetry.logging import get_logger

logger = get_logger(__name__)


class LocalArtifactStore:
    """
    Writes run artifacts below one root directory.

    Every write goes to a temp file in the target directory first and is
    renamed into place, so a reader never sees a half-written artifact.
    """

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root).resolve()

    def _get_full_path(self, ref: str) -> Path:
        """
        Get full filesystem path with validation.

        Raises:
            ArtifactWriteError: If the path escapes the store root
        """
        full_path = (self.root / ref).resolve()
        try:
            full_path.relative_to(self.root)
        except ValueError as e:
            raise ArtifactWriteError(ref, "path escapes the artifact root") from e
        return full_path

    def path(self, ref: str) -> Path:
        return self._get_full_path(ref)

    def exists(self, ref: str) -> bool:
        return self._get_full_path(ref).exists()

    def write_bytes(self, ref: str, content: bytes) -> str:
        """
        Atomically write bytes.

        Returns:
            SHA-256 checksum of the written content

        Raises:
            ArtifactWriteError: If the write fails
        """
        target_path = self._get_full_path(ref)
        try:
            target_path.parent.mkdir(parents=True, exist_ok=True)
            temp_fd, temp_path = tempfile.mkstemp(dir=target_path.parent, prefix=".tmp_", suffix=target_path.suffix)
            try:
                with os.fdopen(temp_fd, "wb") as f:
                    f.write(content)
                os.replace(temp_path, target_path)
            finally:
                if Path(temp_path).exists():
                    os.unlink(temp_path)
        except ArtifactWriteError:
            raise
        except OSError as e:
            raise ArtifactWriteError(str(target_path), f"Write failed: {e}") from e

        logger.info("Wrote %s (%d bytes)", target_path, len(content))
        return hashlib.sha256(content).hexdigest()

    def write_text(self, ref: str, text: str) -> str:
        return self.write_bytes(ref, text.encode("utf-8"))

    def write_json(self, ref: str, data: Any) -> str:
        """Pretty, key-sorted JSON; identical data gives identical bytes"""
        text = json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"
        return self.write_text(ref, text)

    def read_text(self, ref: str) -> str:
        file_path = self._get_full_path(ref)
        if not file_path.exists():
            raise ArtifactNotFoundError(str(file_path))
        return file_path.read_text(encoding="utf-8")

    def read_json(self, ref: str) -> Any:
        return json.loads(self.read_text(ref))
