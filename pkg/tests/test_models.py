from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings as hsettings
from hypothesis import strategies as st

from seceki.core.exceptions import AlreadyRegistered
from seceki.core.exceptions import NotRegistered
from seceki.core.exceptions import StructuralError
from seceki.core.exceptions import ValidationError
from seceki.models import ForwardModel
from seceki.models import ModelRegistry
from seceki.models import register
from seceki.models.blur import BlurSpec
from seceki.models.blur import GaussianBlurModel
from seceki.models.blur import gaussian_kernel
from seceki.models.linear import IdentityModel
from seceki.models.linear import LinearModel
from seceki.models.linear import LinearModelSpec
from seceki.models.lorenz96 import Lorenz96Model
from seceki.models.lorenz96 import Lorenz96Spec
from seceki.models.lorenz96 import fourier_matrix
from seceki.models.lorenz96 import fourier_measure
from seceki.models.lorenz96 import lorenz96_rk4
from seceki.models.lorenz96 import lorenz96_tendency


class TestLinear:
    def test_identity(self, rng):
        u = rng.standard_normal(7)
        model = IdentityModel(7)
        out = model(u)
        assert np.array_equal(out, u)
        out[0] += 1.0
        assert out[0] != u[0]

    def test_matrix_product(self, rng):
        spec = LinearModelSpec.generated(3, 5, seed=9)
        model = LinearModel(spec)
        u = rng.standard_normal(5)
        expected = [sum(spec.a[i, j] * u[j] for j in range(5)) for i in range(3)]
        np.testing.assert_allclose(model(u), expected, atol=1e-12)
        assert (model.input_dim, model.output_dim) == (5, 3)

    def test_generated_is_reproducible(self):
        assert np.array_equal(LinearModelSpec.generated(4, 4, seed=1).a, LinearModelSpec.generated(4, 4, seed=1).a)
        assert not np.array_equal(LinearModelSpec.generated(4, 4, seed=1).a, LinearModelSpec.generated(4, 4, seed=2).a)

    def test_counts_evaluations(self):
        model = IdentityModel(2)
        for _ in range(3):
            model([0.0, 1.0])
        assert model.evaluations == 3
        model.reset_counter()
        assert model.evaluations == 0

    def test_wrong_input_shape(self):
        with pytest.raises(StructuralError):
            IdentityModel(3)(np.zeros(4))


class TestBlur:
    def test_kernel(self):
        kernel = gaussian_kernel(0.7)
        assert kernel.size == 2 * 3 + 1
        assert kernel.sum() == pytest.approx(1.0)
        np.testing.assert_allclose(kernel, kernel[::-1])
        assert kernel.argmax() == 3

    def test_preserves_constant_image(self):
        model = GaussianBlurModel(BlurSpec(6, 9, sigma_blur=1.3))
        np.testing.assert_allclose(model(np.full(54, 0.4)), 0.4, atol=1e-14)

    def test_impulse_response(self):
        spec = BlurSpec(15, 15, sigma_blur=0.7)
        model = GaussianBlurModel(spec)
        image = np.zeros((15, 15))
        image[7, 7] = 1.0
        out = model(image.ravel()).reshape(15, 15)
        kernel = gaussian_kernel(0.7)
        np.testing.assert_allclose(out[4:11, 4:11], np.outer(kernel, kernel), atol=1e-15)
        assert out.sum() == pytest.approx(1.0)

    @given(st.floats(-5, 5), st.floats(-5, 5))
    @hsettings(max_examples=25, deadline=None)
    def test_linear(self, alpha, beta):
        model = GaussianBlurModel(BlurSpec(5, 4))
        rng = np.random.default_rng(0)
        x, y = rng.standard_normal(20), rng.standard_normal(20)
        np.testing.assert_allclose(model(alpha * x + beta * y), alpha * model(x) + beta * model(y), atol=1e-12)

    def test_invalid_sigma(self):
        with pytest.raises(ValidationError):
            BlurSpec(4, 4, sigma_blur=0.0)


class TestLorenz96:
    def test_forcing_is_an_equilibrium(self):
        spec = Lorenz96Spec(n_state=12, forcing=8.0, dt=0.05, t_final=1.0)
        x = np.full(12, 8.0)
        np.testing.assert_array_equal(lorenz96_tendency(x, 8.0), np.zeros(12))
        np.testing.assert_allclose(lorenz96_rk4(x, spec), x, atol=1e-12)

    def test_tendency_indexing(self):
        x = np.arange(5, dtype=float)
        expected = [(x[(i + 1) % 5] - x[(i - 2) % 5]) * x[(i - 1) % 5] - x[i] + 3.0 for i in range(5)]
        np.testing.assert_allclose(lorenz96_tendency(x, 3.0), expected)

    def test_fourth_order_convergence(self):
        x0 = 8.0 + np.sin(np.arange(40) * 0.7)
        runs = [lorenz96_rk4(x0, Lorenz96Spec(dt=dt, t_final=0.5)) for dt in (0.05, 0.025, 0.0125)]
        ratio = np.linalg.norm(runs[0] - runs[1]) / np.linalg.norm(runs[1] - runs[2])
        assert 12.0 <= ratio <= 20.0

    def test_fourier_matches_fft(self, rng):
        x = rng.standard_normal(40)
        wavenumbers = tuple(range(2, 20))
        spectrum = np.fft.rfft(x)
        expected = np.empty(2 * len(wavenumbers))
        expected[0::2] = 2 / 40 * spectrum[list(wavenumbers)].real
        expected[1::2] = -2 / 40 * spectrum[list(wavenumbers)].imag
        np.testing.assert_allclose(fourier_measure(x, wavenumbers), expected, atol=1e-12)

    def test_fourier_recovers_single_wave(self):
        i = np.arange(16)
        x = 3.0 * np.cos(2 * np.pi * 3 * i / 16) - 2.0 * np.sin(2 * np.pi * 5 * i / 16)
        np.testing.assert_allclose(fourier_measure(x, (3, 5, 6)), [3.0, 0.0, 0.0, -2.0, 0.0, 0.0], atol=1e-12)

    @pytest.mark.parametrize("wavenumbers", [(0, 2), (2, 20), (3, 3), ()])
    def test_invalid_wavenumbers(self, wavenumbers):
        with pytest.raises(ValidationError):
            fourier_matrix(40, wavenumbers)

    @pytest.mark.parametrize(
        ("n_state", "expected"),
        [(40, tuple(range(2, 20))), (12, (2, 3, 4, 5)), (8, (2, 3)), (5, (2,)), (4, (1,))],
    )
    def test_default_wavenumbers_follow_state_size(self, n_state, expected):
        spec = Lorenz96Spec(n_state=n_state, dt=0.05, t_final=0.5)
        assert spec.measured_wavenumbers == expected
        assert Lorenz96Model(spec).output_dim == 2 * len(expected)

    def test_t_final_must_be_multiple_of_dt(self):
        with pytest.raises(ValidationError):
            Lorenz96Spec(dt=0.03, t_final=0.5)

    def test_model_dimensions(self):
        model = Lorenz96Model()
        assert (model.input_dim, model.output_dim) == (40, 36)
        assert model(np.full(40, 8.0)) == pytest.approx(np.zeros(36), abs=1e-12)


class TestRegistry:
    def test_builtin_models_registered(self):
        registry = ModelRegistry()
        for name in ("identity", "linear", "gaussian_blur", "lorenz96", "darcy"):
            assert name in registry
        assert registry.get("lorenz96") is Lorenz96Model

    def test_is_singleton(self):
        assert ModelRegistry() is ModelRegistry()

    def test_register_and_unregister(self):
        @register(name="doubling")
        class Doubling(ForwardModel):
            def perform_evaluate(self, u):
                return 2 * u

        registry = ModelRegistry()
        try:
            assert registry.get("doubling") is Doubling
            assert "doubling" in registry.names
            with pytest.raises(AlreadyRegistered):
                registry.register(Doubling, "doubling")
        finally:
            registry.unregister("doubling")
        assert "doubling" not in registry
        with pytest.raises(NotRegistered):
            registry.get("doubling")
        with pytest.raises(NotRegistered):
            registry.unregister("doubling")

    def test_rejects_non_models(self):
        with pytest.raises(StructuralError):
            ModelRegistry().register(dict, "dict")
