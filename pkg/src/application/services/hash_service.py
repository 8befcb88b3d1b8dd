"""
Hash service for artifact digests.

Artifacts are hashed over their canonical JSON form (sorted keys, compact
separators), so a digest depends only on content, never on formatting.
"""

import hashlib
import json
from abc import ABC, abstractmethod
from typing import Any


class HashAlgorithm(ABC):
    """Abstract base class for hash algorithms"""

    @abstractmethod
    def hash(self, data: bytes) -> str:
        """Compute the hex digest of the input bytes"""
        pass


class SHA256Algorithm(HashAlgorithm):
    """SHA-256 hash algorithm implementation"""

    def hash(self, data: bytes) -> str:
        return hashlib.sha256(data).hexdigest()


class HashService:
    """
    Single source of truth for artifact digests.

    Used when writing an artifact and again when loading it, so a checkpoint
    that was edited by hand is detected.
    """

    def __init__(self, algorithm: HashAlgorithm | None = None):
        self.algorithm = algorithm or SHA256Algorithm()

    @staticmethod
    def canonical_json(data: Any) -> str:
        """Convert a JSON-compatible value to a canonical JSON string"""
        return json.dumps(data, sort_keys=True, separators=(",", ":"), allow_nan=False)

    def digest(self, data: Any) -> str:
        """Digest of the canonical JSON form of `data`"""
        return self.algorithm.hash(self.canonical_json(data).encode())

    def digest_bytes(self, content: bytes) -> str:
        return self.algorithm.hash(content)
