"""Shared test fixtures for pytest"""

import sys
from pathlib import Path

import pytest

from src.application.dtos.config import KernelConfig, ModelConfig, SyntheticSpec, TrainConfig
from src.application.services.preprocessing_service import preprocess
from src.application.services.split_service import HoldoutSplit, holdout_split
from src.application.services.synthetic_service import generate_synthetic
from src.domain.entities.cohort import Cohort
from src.infrastructure.config.settings import get_settings
from src.infrastructure.storage.local_storage import LocalArtifactStore

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached per process; tests that set MEDFACT_* variables need a clean cache"""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def small_spec() -> SyntheticSpec:
    """Four features in two planted groups, 60 short stays"""
    return SyntheticSpec(n_dynamic=4, n_static=1, k_true=2, patients=60, t_min=3, t_max=5, noise_std=0.1, seed=3)


@pytest.fixture
def raw_cohort(small_spec: SyntheticSpec) -> Cohort:
    cohort, _ = generate_synthetic(small_spec)
    return cohort


@pytest.fixture
def holdout(raw_cohort: Cohort) -> HoldoutSplit:
    return holdout_split(raw_cohort.labels, seed=0)


@pytest.fixture
def prepared_cohort(raw_cohort: Cohort, holdout: HoldoutSplit) -> Cohort:
    return preprocess(raw_cohort, holdout.train)


@pytest.fixture
def tiny_config() -> TrainConfig:
    """A few cheap epochs with tiny dimensions"""
    return TrainConfig(
        epochs=4,
        batch_size=16,
        learning_rate=0.01,
        k=2,
        cluster_epoch_fraction=0.5,
        seed=11,
        patience=10,
        kernel=KernelConfig(sample_cap=32),
        model=ModelConfig(hidden_size=3, embed_dim=3),
    )


@pytest.fixture
def artifact_store(tmp_path) -> LocalArtifactStore:
    """Provides a LocalArtifactStore below a temporary root."""
    root = tmp_path / "artifacts"
    root.mkdir()
    return LocalArtifactStore(root)
