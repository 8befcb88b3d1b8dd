import json

import numpy as np
import pytest

from src.application.use_cases.training.trainer import train
from src.infrastructure.exceptions import ArtifactChecksumMismatchError, ArtifactNotFoundError, CheckpointFormatError
from src.infrastructure.persistence.checkpoint import CheckpointRepository


@pytest.fixture
def trained(prepared_cohort, holdout, tiny_config):
    return train(prepared_cohort, holdout.train, holdout.validation, tiny_config)


@pytest.fixture
def repository(artifact_store):
    return CheckpointRepository(artifact_store)


class TestCheckpointRoundTrip:
    def test_reload_is_bit_identical(self, trained, repository, prepared_cohort):
        """
        GIVEN a trained model
        WHEN it is saved and loaded again
        THEN every array and every prediction is reproduced exactly
        """
        # WHEN
        repository.save(trained)
        loaded = repository.load("checkpoint.json")

        # THEN
        for name, value in trained.params.named().items():
            np.testing.assert_array_equal(loaded.params.named()[name], value)
        np.testing.assert_array_equal(loaded.correlations.values, trained.correlations.values)
        np.testing.assert_array_equal(loaded.graph.adjacency, trained.graph.adjacency)
        assert loaded.assignment == trained.assignment
        assert loaded.config == trained.config
        assert loaded.normalization_stats == trained.normalization_stats
        assert loaded.history == trained.history
        expected, _ = trained.predict(prepared_cohort.records)
        actual, _ = loaded.predict(prepared_cohort.records)
        np.testing.assert_array_equal(actual, expected)

    def test_same_model_same_bytes(self, trained, repository):
        assert repository.save(trained, "a.json") == repository.save(trained, "b.json")


class TestCheckpointIntegrity:
    def test_edited_body_is_detected(self, trained, repository, artifact_store):
        """
        GIVEN a saved checkpoint whose body is edited afterwards
        WHEN it is loaded
        THEN the stored digest no longer matches
        """
        # GIVEN
        repository.save(trained)
        path = artifact_store.path("checkpoint.json")
        document = json.loads(path.read_text())
        document["checkpoint"]["correlations"][0][1] += 0.01
        path.write_text(json.dumps(document))

        # WHEN / THEN
        with pytest.raises(ArtifactChecksumMismatchError):
            repository.load("checkpoint.json")

    def test_schema_violation(self, trained, repository, artifact_store):
        repository.save(trained)
        path = artifact_store.path("checkpoint.json")
        document = json.loads(path.read_text())
        document["format_version"] = 99
        path.write_text(json.dumps(document))

        with pytest.raises(CheckpointFormatError):
            repository.load("checkpoint.json")

    def test_missing_checkpoint(self, repository):
        with pytest.raises(ArtifactNotFoundError):
            repository.load("absent.json")
