from src.infrastructure.storage.local_storage import LocalArtifactStore

__all__ = ["LocalArtifactStore"]
