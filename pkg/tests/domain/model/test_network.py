import numpy as np
import pytest

from src.domain.model.batch import PatientBatch
from src.domain.model.correlation import build_graph
from src.domain.model.network import dynamic_embeddings, forward, predict, predict_patient
from src.domain.model.parameters import initialize_params
from src.domain.value_objects.core import ClusterAssignment, CorrelationMatrix
from src.shared.numerics import autodiff as ad
from src.shared.numerics.rng import SeededRng
from tests.factories import make_record
from tests.gradient_check import max_relative_error, numeric_gradient


@pytest.fixture
def network_setup():
    """F=4, S=2, h=d=3, eight patients of 2..5 visits"""
    rng = np.random.default_rng(8)
    records = [
        make_record(f"p{b}", rng.normal(size=(int(rng.integers(2, 6)), 4)).tolist(), rng.normal(size=2).tolist(), b % 2)
        for b in range(8)
    ]
    params = initialize_params(4, 2, SeededRng(3), hidden_size=3, embed_dim=3, attention_dim=3)
    r = CorrelationMatrix(np.array([[1.0, 0.7, 0.2, 0.1], [0.7, 1.0, 0.3, 0.2], [0.2, 0.3, 1.0, 0.6], [0.1, 0.2, 0.6, 1.0]]))
    graph = build_graph(r, ClusterAssignment(((0, 1), (2, 3)), 4))
    return records, params, graph


class TestForward:
    """End-to-end checks of the recorded forward pass."""

    def test_gradients_match_finite_differences(self, network_setup):
        """
        GIVEN the full network on a batch of eight ragged patients
        WHEN the mean loss is differentiated
        THEN every parameter gradient matches central finite differences.
        """
        # GIVEN
        records, params, graph = network_setup
        batch = PatientBatch.from_records(records)
        values = params.named()

        def loss(current):
            frozen = params.replace_named(current).map(lambda _, v: ad.constant(v))
            return float(forward(batch, frozen, graph).loss.value[0, 0])

        # WHEN
        grads = ad.backward(forward(batch, params.bind(), graph).loss)

        # THEN
        assert set(grads) == set(values)
        for name in values:
            assert max_relative_error(grads[name], numeric_gradient(loss, values, name)) <= 1e-6, name

    def test_batch_scores_match_single_patient_path(self, network_setup):
        records, params, graph = network_setup

        scores, alpha = predict(records, params, graph, chunk=3)

        for b, record in enumerate(records):
            single = predict_patient(record, params, graph)
            assert scores[b] == pytest.approx(single.y_hat, abs=1e-12)
            assert np.allclose(alpha[b], single.alpha, atol=1e-12)

    def test_dynamic_embeddings_shape(self, network_setup):
        records, params, _ = network_setup
        z = dynamic_embeddings(records, params, chunk=5)
        assert z.shape == (8, 4, 3)
        assert np.all(z >= 0.0)

    def test_no_records_give_empty_predictions(self, network_setup):
        _, params, graph = network_setup
        scores, alpha = predict([], params, graph)
        assert scores.shape == (0,) and alpha.shape == (0, 5)
