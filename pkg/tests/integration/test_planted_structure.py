"""
End-to-end experiments on planted-structure cohorts.

These train full-size models and take minutes; run them with `pytest -m slow`.
"""

import json
import os
from pathlib import Path

import numpy as np
import pytest

from src.application.dtos.config import SchemaConfig, SyntheticSpec, TrainConfig
from src.application.services.metrics_service import evaluate_scores
from src.application.services.preprocessing_service import preprocess
from src.application.services.split_service import holdout_split
from src.application.services.synthetic_service import generate_synthetic
from src.application.use_cases.clustering.report import adjusted_rand_index
from src.application.use_cases.training.trainer import train
from src.domain.enums import AblationMode
from src.infrastructure.persistence.psv_cohort import load_psv_cohort

PLANTED = SyntheticSpec(n_dynamic=12, n_static=2, k_true=3, patients=2000, t_min=12, t_max=20, noise_std=0.3, seed=7)


def _train_and_score(cohort, config):
    split = holdout_split(cohort.labels, config.seed)
    prepared = preprocess(cohort, split.train)
    model = train(prepared, split.train, split.validation, config)
    scores, _ = model.predict([prepared.records[i] for i in split.test])
    return model, evaluate_scores(scores, prepared.labels[list(split.test)])


@pytest.fixture(scope="module")
def planted_cohort():
    return generate_synthetic(PLANTED)


@pytest.mark.slow
@pytest.mark.integration
class TestPlantedStructure:
    def test_groups_are_recovered_and_the_task_is_learned(self, planted_cohort):
        """
        GIVEN 2000 patients whose 12 features follow 3 planted groups
        WHEN MedFACT trains with K=3 for 30 epochs
        THEN the learned groups match the planted ones and test AUROC is high
        """
        # GIVEN
        cohort, planted = planted_cohort

        # WHEN
        model, report = _train_and_score(cohort, TrainConfig(epochs=30, k=3, seed=0))

        # THEN
        assert adjusted_rand_index(model.assignment, planted) >= 0.8
        assert report.auroc >= 0.85

    def test_full_model_is_not_worse_than_the_uncorrelated_graph(self, planted_cohort):
        cohort, _ = planted_cohort
        full, ablated = [], []
        for seed in range(5):
            _, report = _train_and_score(cohort, TrainConfig(epochs=30, k=3, seed=seed))
            full.append(report.auprc)
            _, report = _train_and_score(
                cohort, TrainConfig(epochs=30, k=3, seed=seed, ablation=AblationMode.COR_MINUS)
            )
            ablated.append(report.auprc)
        assert np.mean(full) >= np.mean(ablated)


@pytest.mark.slow
@pytest.mark.integration
@pytest.mark.skipif("MEDFACT_CARDIOLOGY_DIR" not in os.environ, reason="public challenge data not downloaded")
def test_cardiology_ingestion():
    schema_path = Path(__file__).parents[2] / "schemas" / "physionet2019.json"
    schema = SchemaConfig.model_validate(json.loads(schema_path.read_text()))

    cohort = load_psv_cohort(os.environ["MEDFACT_CARDIOLOGY_DIR"], schema)

    assert len(cohort) == 40_336
    assert (cohort.n_dynamic, cohort.n_static) == (34, 5)
    assert cohort.positive_fraction == pytest.approx(0.0726, abs=0.001)
