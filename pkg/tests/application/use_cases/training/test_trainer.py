import numpy as np
import pytest

from src.application.dtos.config import SyntheticSpec
from src.application.services.preprocessing_service import preprocess
from src.application.services.split_service import holdout_split
from src.application.services.synthetic_service import generate_synthetic
from src.application.use_cases.training import trainer as trainer_module
from src.application.use_cases.training.trainer import EpochRecord, train
from src.domain.enums import AblationMode
from src.domain.exceptions import ContractError, NumericDivergenceError


class TestSchedule:
    """Graph updates happen only in the leading clustering epochs."""

    def test_graph_is_frozen_after_the_clustering_epochs(self, prepared_cohort, holdout, tiny_config):
        """
        GIVEN 10 epochs with a clustering fraction of 0.2
        WHEN training records the graph after every epoch
        THEN exactly 2 graph updates happen and A never changes afterwards.
        """
        # GIVEN
        config = tiny_config.model_copy(update={"epochs": 10, "cluster_epoch_fraction": 0.2})
        graphs = []

        # WHEN
        model = train(
            prepared_cohort,
            holdout.train,
            holdout.validation,
            config,
            on_epoch=lambda record, graph: graphs.append(graph.adjacency.copy()),
        )

        # THEN
        assert model.recluster_events == 2
        assert [r.graph_updated for r in model.history[:3]] == [True, True, False]
        frozen = graphs[1]
        for adjacency in graphs[2:]:
            np.testing.assert_array_equal(adjacency, frozen)
        np.testing.assert_array_equal(model.graph.adjacency, frozen)
        assert model.best_epoch >= 1

    def test_snapshot_groups_match_the_final_update(self, prepared_cohort, holdout, tiny_config):
        model = train(prepared_cohort, holdout.train, holdout.validation, tiny_config)
        last_update = [r for r in model.history if r.graph_updated][-1]
        assert model.assignment.groups == last_update.groups
        assert model.assignment.k == 2

    def test_same_seed_same_model(self, prepared_cohort, holdout, tiny_config):
        first = train(prepared_cohort, holdout.train, holdout.validation, tiny_config)
        second = train(prepared_cohort, holdout.train, holdout.validation, tiny_config)

        for name, value in first.params.named().items():
            np.testing.assert_array_equal(value, second.params.named()[name])
        np.testing.assert_array_equal(first.graph.adjacency, second.graph.adjacency)
        assert [r.train_loss for r in first.history] == [r.train_loss for r in second.history]

    def test_training_loss_decreases(self, tiny_config):
        """
        GIVEN a small low-noise planted cohort
        WHEN training runs for a few epochs
        THEN the last epoch's mean training loss is below the first epoch's.
        """
        # GIVEN
        spec = SyntheticSpec(n_dynamic=4, n_static=1, k_true=2, patients=120, t_min=3, t_max=5, noise_std=0.05, seed=5)
        cohort, _ = generate_synthetic(spec)
        split = holdout_split(cohort.labels, seed=0)
        prepared = preprocess(cohort, split.train)
        config = tiny_config.model_copy(update={"epochs": 8, "patience": 100})

        # WHEN
        model = train(prepared, split.train, split.validation, config)

        # THEN
        assert len(model.history) == 8
        assert model.history[-1].train_loss < model.history[0].train_loss

    def test_patience_stops_early(self, prepared_cohort, holdout, tiny_config):
        config = tiny_config.model_copy(update={"epochs": 12, "patience": 1, "learning_rate": 1e-9, "cluster_epoch_fraction": 0.1})
        model = train(prepared_cohort, holdout.train, holdout.validation, config)
        assert len(model.history) < 12

    def test_without_validation_the_training_loss_is_monitored(self, prepared_cohort, holdout, tiny_config):
        model = train(prepared_cohort, holdout.train, (), tiny_config)
        assert all(r.val_loss is None for r in model.history)
        eligible = [r for r in model.history if r.epoch >= tiny_config.cluster_epochs - 1]
        assert model.best_epoch == min(eligible, key=lambda r: r.train_loss).epoch


class TestAblations:
    def test_cor_minus_uses_the_all_ones_graph(self, prepared_cohort, holdout, tiny_config):
        config = tiny_config.model_copy(update={"ablation": AblationMode.COR_MINUS})
        model = train(prepared_cohort, holdout.train, holdout.validation, config)

        np.testing.assert_array_equal(model.graph.adjacency, np.ones((5, 5)))
        assert model.recluster_events == 0
        np.testing.assert_array_equal(model.correlations.values, np.ones((4, 4)))
        assert model.assignment.k == 1

    def test_clu_minus_uses_r_without_clustering(self, prepared_cohort, holdout, tiny_config):
        config = tiny_config.model_copy(update={"ablation": AblationMode.CLU_MINUS})
        model = train(prepared_cohort, holdout.train, holdout.validation, config)

        assert model.assignment.groups == ((0, 1, 2, 3),)
        assert model.recluster_events == tiny_config.cluster_epochs
        np.testing.assert_array_equal(model.graph.adjacency[:4, :4], model.correlations.values)
        np.testing.assert_array_equal(model.graph.adjacency[4, :], np.ones(5))
        assert not np.array_equal(model.correlations.values, np.ones((4, 4)))


class TestFailures:
    def test_empty_training_split(self, prepared_cohort, tiny_config):
        with pytest.raises(ContractError):
            train(prepared_cohort, (), (), tiny_config)

    def test_non_finite_loss_aborts(self, prepared_cohort, holdout, tiny_config, monkeypatch):
        """
        GIVEN a forward pass whose loss comes back NaN
        WHEN training runs
        THEN it stops with NumericDivergenceError naming the epoch and batch.
        """
        original = trainer_module.forward

        def poisoned(*args, **kwargs):
            result = original(*args, **kwargs)
            result.loss.value = np.full((1, 1), np.nan)
            return result

        monkeypatch.setattr(trainer_module, "forward", poisoned)

        with pytest.raises(NumericDivergenceError) as exc_info:
            train(prepared_cohort, holdout.train, holdout.validation, tiny_config)
        assert exc_info.value.details["epoch"] == 0
        assert exc_info.value.details["batch"] == 0


class TestEpochRecord:
    def test_dict_form_survives_json_types(self):
        record = EpochRecord(0, 0.7, 0.69, 0.5, None, True, ((0, 2), (1,)))
        restored = EpochRecord.from_dict(record.to_dict())
        assert restored == record
        assert record.to_dict()["groups"] == [[0, 2], [1]]
