import pytest

from src.application.services.synthetic_service import generate_synthetic
from src.application.use_cases.clustering.report import adjusted_rand_index, cluster_report
from src.application.use_cases.training.trainer import train
from src.domain.value_objects.core import ClusterAssignment


class TestAdjustedRandIndex:
    def test_relabelled_partition_scores_one(self):
        planted = ClusterAssignment(((0, 1), (2, 3)), 4)
        assert adjusted_rand_index(ClusterAssignment.from_labels([1, 1, 0, 0]), planted) == pytest.approx(1.0)

    def test_single_group_against_split_scores_zero(self):
        planted = ClusterAssignment(((0, 1), (2, 3)), 4)
        assert adjusted_rand_index(ClusterAssignment(((0, 1, 2, 3),), 4), planted) == pytest.approx(0.0)


class TestClusterReport:
    def test_report_names_groups_and_scores_planted_partition(self, small_spec, prepared_cohort, holdout, tiny_config):
        _, planted = generate_synthetic(small_spec)
        model = train(prepared_cohort, holdout.train, holdout.validation, tiny_config)

        report = cluster_report(model, planted)

        assert report["k"] == 2
        assert report["ablation"] == "full"
        assert sorted(name for group in report["groups"] for name in group) == ["x00", "x01", "x02", "x03"]
        assert len(report["correlations"]["matrix"]) == 4
        assert -1.0 <= report["planted_ari"] <= 1.0

    def test_planted_score_is_optional(self, prepared_cohort, holdout, tiny_config):
        model = train(prepared_cohort, holdout.train, holdout.validation, tiny_config)
        assert "planted_ari" not in cluster_report(model)
