from src.application.interfaces.storage import IArtifactStore

__all__ = ["IArtifactStore"]
