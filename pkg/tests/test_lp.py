"""lp regularization"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seceki.core.exceptions import ConfigError
from seceki.eki import MeasurementModel
from seceki.eki import RunConfig
from seceki.eki import init_ensemble
from seceki.lp import RegularizationConfig
from seceki.lp import augment
from seceki.lp import init_latent_ensemble
from seceki.lp import lp_run
from seceki.lp import psi
from seceki.lp import xi
from seceki.models.linear import LinearModel
from seceki.models.linear import LinearModelSpec
from seceki.sec import SecConfig

P_VALUES = (0.7, 1.0, 1.5, 2.0)


class TestTransforms:
    @pytest.mark.parametrize("p", P_VALUES)
    def test_round_trips(self, p, rng):
        u = rng.standard_normal(50) * 3
        np.testing.assert_allclose(xi(psi(u, p), p), u, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(psi(xi(u, p), p), u, rtol=1e-12, atol=1e-12)

    def test_p1_squares_with_sign(self):
        np.testing.assert_array_equal(psi([-2.0, 0.0, 3.0], 1.0), [-4.0, 0.0, 9.0])
        np.testing.assert_array_equal(xi([-4.0, 0.0, 9.0], 1.0), [-2.0, 0.0, 3.0])

    def test_p2_is_identity(self, rng):
        u = rng.standard_normal(5)
        assert np.array_equal(psi(u, 2.0), u)
        assert np.array_equal(xi(u, 2.0), u)

    @given(st.floats(-100, 100, allow_nan=False), st.floats(-100, 100, allow_nan=False), st.sampled_from(P_VALUES))
    def test_odd_and_increasing(self, x, y, p):
        assert psi(-x, p) == -psi(x, p)
        if x < y:
            assert psi(x, p) <= psi(y, p)

    @given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=10), st.sampled_from(P_VALUES))
    def test_latent_l2_is_lp_penalty(self, values, p):
        v = np.array(values)
        reg = RegularizationConfig(p=p, lam=2.5)
        assert reg.penalty(psi(v, p)) == pytest.approx(2.5 * np.sum(v**2), rel=1e-9, abs=1e-12)

    @pytest.mark.parametrize("p", (0.4, 2.5))
    def test_p_out_of_range(self, p):
        with pytest.raises(ConfigError) as info:
            psi([1.0], p)
        assert info.value.key == "reg.p"

    def test_lambda_must_be_positive(self):
        with pytest.raises(ConfigError) as info:
            RegularizationConfig(p=1.0, lam=0.0)
        assert info.value.key == "reg.lambda"


@pytest.fixture
def linear_setup():
    model = LinearModel(LinearModelSpec.generated(5, 8, seed=11))
    truth = np.zeros(8)
    truth[[1, 6]] = [1.5, -1.0]
    measurement = MeasurementModel.diagonal(model(truth), 0.01)
    return model, measurement, truth


class TestAugment:
    def test_shapes(self, linear_setup):
        model, measurement, _ = linear_setup
        aug = augment(model, measurement, RegularizationConfig(p=1.0, lam=4.0))
        assert aug.z.shape == (13,)
        assert np.array_equal(aug.z[5:], np.zeros(8))
        assert aug.f.input_dim == 8 and aug.f.output_dim == 13
        np.testing.assert_allclose(np.diag(aug.sigma)[5:], 0.25)
        np.testing.assert_allclose(aug.sigma[:5, :5], measurement.gamma)

    @pytest.mark.parametrize("p", P_VALUES)
    def test_misfit_identity(self, linear_setup, rng, p):
        model, measurement, _ = linear_setup
        lam = 3.0
        aug = augment(model, measurement, RegularizationConfig(p=p, lam=lam))
        for _ in range(25):
            v = rng.standard_normal(8)
            expected = lam * v @ v + measurement.misfit(model(psi(v, p)))
            assert aug.misfit(v) == pytest.approx(expected, rel=1e-10)

    def test_augmented_noise_factor(self, linear_setup, rng):
        model, measurement, _ = linear_setup
        aug = augment(model, measurement, RegularizationConfig(p=1.0, lam=4.0))
        draws = np.vstack([aug.measurement.sample_noise(rng) for _ in range(20_000)])
        np.testing.assert_allclose(draws.var(axis=0), np.diag(aug.sigma), rtol=0.05)


class TestLpRun:
    def test_latent_ensemble_is_transformed_gaussian(self):
        cfg = RunConfig(ensemble_size=6, n_iterations=1, init_mean=np.zeros(4), init_variance=1.0, rng_seed=2)
        reg = RegularizationConfig(p=1.0, lam=1.0)
        np.testing.assert_allclose(init_latent_ensemble(cfg, reg).members, xi(init_ensemble(cfg).members, 1.0))

    def test_estimates_live_in_unknown_space(self, linear_setup):
        model, measurement, truth = linear_setup
        reg = RegularizationConfig(p=1.0, lam=1.0)
        cfg = RunConfig(ensemble_size=30, n_iterations=4, init_mean=np.zeros(8), init_variance=1.0, rng_seed=0, sec=SecConfig.power(1.0))
        record = lp_run(model, measurement, reg, cfg, truth=truth)
        np.testing.assert_allclose(record.final.estimate, psi(record.final_ensemble.mean(), 1.0))
        assert record.final.data_misfit == pytest.approx(measurement.misfit(model(record.final.estimate)))
        assert record.final.l1_error == pytest.approx(np.abs(record.final.estimate - truth).sum())
        assert record.final_ensemble.dim == 8

    def test_p2_large_ensemble_matches_tikhonov(self, linear_setup):
        model, measurement, _ = linear_setup
        lam = 1.0
        a = model.matrix
        gamma_inv = np.linalg.inv(measurement.gamma)
        tikhonov = np.linalg.solve(a.T @ gamma_inv @ a + lam * np.eye(8), a.T @ gamma_inv @ measurement.y)
        cfg = RunConfig(ensemble_size=1000, n_iterations=40, init_mean=np.zeros(8), init_variance=1.0, rng_seed=4)
        record = lp_run(model, measurement, RegularizationConfig(p=2.0, lam=lam), cfg)
        assert np.linalg.norm(record.final.estimate - tikhonov) / np.linalg.norm(tikhonov) < 0.03
