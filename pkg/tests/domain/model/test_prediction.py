import numpy as np
import pytest

from src.domain.model.parameters import HeadParams
from src.domain.model.prediction import attend_predict, attend_predict_batch, bce_loss, mean_bce
from src.shared.numerics import autodiff as ad


def _head(rng: np.random.Generator, d: int = 3, d_a: int = 2) -> HeadParams:
    return HeadParams(
        w_q=rng.normal(size=(d, d_a)),
        w_k=rng.normal(size=(d, d_a)),
        w_v=rng.normal(size=(d, d_a)),
        w_pred=rng.normal(size=(d_a, 1)),
    )


class TestAttendPredict:
    """Unit tests for the static-query attention head."""

    def test_one_feature_by_hand(self):
        """
        GIVEN F=1, d=d_a=1, Z* = [[2], [1]] and every weight 1
        WHEN the head runs
        THEN alpha = softmax(tanh 2, tanh 1), e = alpha . (2, 1) and y_hat = sigmoid(e).
        """
        ones = np.array([[1.0]])
        head = HeadParams(w_q=ones, w_k=ones, w_v=ones, w_pred=ones)

        out = attend_predict(np.array([[2.0], [1.0]]), head)

        assert out.alpha == pytest.approx([0.550442, 0.449558], abs=1e-6)
        assert out.representation[0] == pytest.approx(1.550442, abs=1e-6)
        assert out.y_hat == pytest.approx(0.824974, abs=1e-6)

    def test_zero_query_gives_uniform_attention(self):
        rng = np.random.default_rng(0)
        head = _head(rng)
        head = HeadParams(w_q=np.zeros_like(head.w_q), w_k=head.w_k, w_v=head.w_v, w_pred=head.w_pred)

        out = attend_predict(rng.uniform(size=(5, 3)), head)

        assert np.allclose(out.alpha, 0.2)

    def test_zero_prediction_weights_give_one_half(self):
        rng = np.random.default_rng(1)
        head = _head(rng)
        head = HeadParams(w_q=head.w_q, w_k=head.w_k, w_v=head.w_v, w_pred=np.zeros_like(head.w_pred))
        assert attend_predict(rng.uniform(size=(4, 3)), head).y_hat == 0.5

    def test_attention_weights_form_a_distribution(self):
        rng = np.random.default_rng(2)
        out = attend_predict(rng.uniform(size=(6, 3)), _head(rng))
        assert np.all(out.alpha >= 0.0)
        assert out.alpha.sum() == pytest.approx(1.0)
        assert 0.0 < out.y_hat < 1.0

    def test_batch_matches_single_patient(self):
        """
        GIVEN four patients stacked feature-major
        WHEN the batched head runs
        THEN each patient's y_hat and alpha equal the single-patient values.
        """
        rng = np.random.default_rng(3)
        head = _head(rng)
        patients = [rng.uniform(size=(5, 3)) for _ in range(4)]
        stacked = np.stack(patients, axis=1).reshape(20, 3)
        frozen = HeadParams(**{k: ad.constant(v) for k, v in vars(head).items()})

        out = attend_predict_batch(ad.constant(stacked), frozen, 4)

        for b, z in enumerate(patients):
            single = attend_predict(z, head)
            assert out.y_hat.value[b, 0] == pytest.approx(single.y_hat, abs=1e-12)
            assert np.allclose(out.alpha.value[b], single.alpha, atol=1e-12)


class TestBceLoss:
    @pytest.mark.parametrize("label", [0, 1])
    def test_half_probability_costs_ln2(self, label):
        assert bce_loss(0.5, label) == pytest.approx(0.693147, abs=1e-6)

    def test_clamped_extremes_stay_finite(self):
        assert np.isfinite(bce_loss(0.0, 1))
        assert np.isfinite(bce_loss(1.0, 0))

    @pytest.mark.parametrize(("label", "direction"), [(1, -1.0), (0, 1.0)])
    def test_monotone_in_the_prediction(self, label, direction):
        """
        GIVEN predictions rising from 0.001 to 0.999
        WHEN the loss is taken against a fixed label
        THEN it strictly falls for a positive and strictly rises for a negative.
        """
        # GIVEN
        grid = np.linspace(0.001, 0.999, 101)

        # WHEN
        losses = np.array([bce_loss(p, label) for p in grid])

        # THEN
        assert np.all(direction * np.diff(losses) > 0.0)

    def test_mean_over_patients(self):
        assert mean_bce([0.5, 0.5], [1, 0]) == pytest.approx(np.log(2.0))
