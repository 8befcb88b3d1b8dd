import numpy as np
import pytest

from src.domain.entities.cohort import Cohort
from src.domain.exceptions import ContractError
from tests.factories import make_cohort, make_record


class TestPatientRecord:
    def test_rejects_non_binary_label(self):
        with pytest.raises(ContractError):
            make_record("p", [[1.0]], label=2)

    def test_rejects_empty_visits(self):
        with pytest.raises(ContractError):
            make_record("p", np.empty((0, 2)).tolist())

    def test_missing_values_are_reported(self):
        assert make_record("p", [[1.0, np.nan]]).has_missing()


class TestCohort:
    def test_statistics_table_fields(self):
        """
        GIVEN three patients with 1, 2 and 3 visits and one positive
        WHEN statistics are computed
        THEN counts, visit extremes and the positive rate follow.
        """
        cohort = make_cohort(
            [
                make_record("a", [[1.0, 2.0]], label=1),
                make_record("b", [[1.0, 2.0]] * 2),
                make_record("c", [[1.0, 2.0]] * 3),
            ]
        )

        stats = cohort.statistics()

        assert (stats.patients, stats.visits, stats.max_visits, stats.min_visits) == (3, 6, 3, 1)
        assert stats.avg_visits == pytest.approx(2.0)
        assert stats.dynamic_features == 2 and stats.static_features == 0
        assert stats.positive_rate == pytest.approx(1 / 3)

    def test_rejects_layout_mismatch(self):
        with pytest.raises(ContractError):
            Cohort(records=(make_record("a", [[1.0]]),), dynamic_names=("x", "y"), static_names=())

    def test_empty_cohort_statistics(self):
        stats = Cohort(records=(), dynamic_names=("x",), static_names=()).statistics()
        assert stats.patients == 0 and stats.positive_rate == 0.0
