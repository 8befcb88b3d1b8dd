import numpy as np
import pytest

from src.domain.exceptions import ContractError
from src.domain.model.batch import PatientBatch, to_patient_major
from src.domain.model.embedding import embed_batch, embed_patient, gru_forward
from src.domain.model.parameters import GruChannelParams, initialize_params
from src.shared.numerics import autodiff as ad
from src.shared.numerics.rng import SeededRng
from tests.factories import make_record


def _scalar_gru(**overrides: float) -> GruChannelParams[np.ndarray]:
    values = {name: 0.0 for name in ("w_z", "u_z", "b_z", "w_r", "u_r", "b_r", "w_h", "u_h", "b_h")}
    values.update(overrides)
    return GruChannelParams(**{k: np.array([[v]]) for k, v in values.items()})


@pytest.fixture
def params():
    return initialize_params(3, 2, SeededRng(5), hidden_size=4, embed_dim=3, attention_dim=3)


class TestGru:
    """Unit tests for the per-feature GRU."""

    def test_single_step_by_hand(self):
        """
        GIVEN h=1, zero update-gate weights (z = 0.5) and W_h = 1
        WHEN the series [1] is run
        THEN h_1 = 0.5 tanh(1).
        """
        h = gru_forward([1.0], _scalar_gru(w_h=1.0))
        assert h[0] == pytest.approx(0.380797, abs=1e-6)
        assert h[0] == pytest.approx(0.5 * np.tanh(1.0))

    def test_zero_parameters_keep_zero_state(self):
        assert np.array_equal(gru_forward([3.0, -1.0, 2.0], _scalar_gru()), np.zeros(1))

    def test_series_order_matters(self):
        params = _scalar_gru(w_h=1.0, u_h=1.0)
        assert gru_forward([1.0, 0.0], params)[0] != pytest.approx(gru_forward([0.0, 1.0], params)[0])

    def test_empty_series_is_rejected(self):
        with pytest.raises(ContractError):
            gru_forward([], _scalar_gru())


class TestEmbedding:
    def test_shape_and_non_negativity(self, params):
        record = make_record("p", [[0.1, -2.0, 0.5], [1.0, 0.3, -0.7]], [0.2, -1.0])
        z = embed_patient(record, params)
        assert z.shape == (4, 3)
        assert np.all(z >= 0.0)

    def test_feature_channels_are_isolated(self, params):
        """
        GIVEN a patient and a copy whose feature 1 series differs
        WHEN both are embedded
        THEN only row 1 of Z changes.
        """
        base = make_record("p", [[0.1, -2.0, 0.5], [1.0, 0.3, -0.7]], [0.2, -1.0])
        changed = make_record("p", [[0.1, 2.0, 0.5], [1.0, -0.9, -0.7]], [0.2, -1.0])

        z_base, z_changed = embed_patient(base, params), embed_patient(changed, params)

        unchanged_rows = [0, 2, 3]
        assert np.array_equal(z_base[unchanged_rows], z_changed[unchanged_rows])

    def test_padding_does_not_leak_into_short_series(self, params):
        """
        GIVEN a batch mixing a 2-visit and a 4-visit patient
        WHEN the batch is embedded
        THEN each patient's rows equal its own single-patient embedding.
        """
        short = make_record("a", [[0.5, 0.1, -0.2], [0.3, 0.0, 1.0]], [1.0, 0.0])
        long = make_record("b", [[1.0, 1.0, 1.0], [0.0, -1.0, 0.5], [2.0, 0.1, 0.1], [0.4, 0.4, -0.4]], [0.0, 1.0])
        frozen = params.map(lambda _, v: ad.constant(v))
        batch = PatientBatch.from_records([short, long])

        z = to_patient_major(embed_batch(batch, frozen).value, batch.n_nodes, batch.size)

        assert np.allclose(z[0], embed_patient(short, params), atol=1e-12)
        assert np.allclose(z[1], embed_patient(long, params), atol=1e-12)

    def test_feature_count_mismatch_is_rejected(self, params):
        with pytest.raises(ContractError):
            embed_patient(make_record("p", [[1.0, 2.0]], [0.0, 0.0]), params)
