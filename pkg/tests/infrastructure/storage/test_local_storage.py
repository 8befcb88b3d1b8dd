"""Unit tests for LocalArtifactStore"""

import hashlib

import pytest

from src.infrastructure.exceptions import ArtifactNotFoundError, ArtifactWriteError


class TestLocalArtifactStoreWrite:
    def test_write_bytes_returns_checksum(self, artifact_store):
        """
        GIVEN some content
        WHEN writing it to a nested reference
        THEN parent directories are created and the SHA-256 of the content is returned
        """
        # GIVEN
        content = b"Hello, World! This is test content."

        # WHEN
        checksum = artifact_store.write_bytes("runs/a/file.bin", content)

        # THEN
        assert checksum == hashlib.sha256(content).hexdigest()
        assert artifact_store.path("runs/a/file.bin").read_bytes() == content

    def test_no_temp_files_remain(self, artifact_store):
        artifact_store.write_text("report.txt", "AUROC 0.9\n")
        artifact_store.write_text("report.txt", "AUROC 0.8\n")
        names = [p.name for p in artifact_store.root.iterdir()]
        assert names == ["report.txt"]
        assert artifact_store.read_text("report.txt") == "AUROC 0.8\n"

    def test_json_is_key_sorted_and_stable(self, artifact_store):
        first = artifact_store.write_json("a.json", {"b": 1, "a": [1.5, 2]})
        second = artifact_store.write_json("b.json", {"a": [1.5, 2], "b": 1})
        assert first == second
        assert artifact_store.read_json("a.json") == {"a": [1.5, 2], "b": 1}

    def test_nan_is_rejected(self, artifact_store):
        with pytest.raises(ValueError):
            artifact_store.write_json("bad.json", {"x": float("nan")})


class TestLocalArtifactStoreSecurity:
    @pytest.mark.parametrize("ref", ["../escape.txt", "a/../../escape.txt"])
    def test_path_traversal_is_blocked(self, artifact_store, ref):
        """
        GIVEN a reference that resolves outside the root
        WHEN writing it
        THEN ArtifactWriteError is raised and nothing is written
        """
        with pytest.raises(ArtifactWriteError):
            artifact_store.write_text(ref, "x")
        assert not (artifact_store.root.parent / "escape.txt").exists()


class TestLocalArtifactStoreRead:
    def test_missing_file(self, artifact_store):
        with pytest.raises(ArtifactNotFoundError):
            artifact_store.read_text("missing.json")
        assert not artifact_store.exists("missing.json")
