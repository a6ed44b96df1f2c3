"""Construction of forward models and true unknowns from a validated config."""

from __future__ import annotations

import dataclasses

import numpy as np

from seceki.core.exceptions import ConfigError
from seceki.core.exceptions import StorageError
from seceki.core.exceptions import ValidationError
from seceki.eki.problem import MeasurementModel
from seceki.harness.config import ExperimentConfig
from seceki.harness.config import model_input_dim
from seceki.models.base import ForwardModel
from seceki.models.blur import BlurSpec
from seceki.models.darcy import DarcySpec
from seceki.models.darcy import square_inclusion
from seceki.models.image import ImageBuffer
from seceki.models.image import load_image
from seceki.models.image import resize
from seceki.models.image import synthetic_image
from seceki.models.linear import LinearModelSpec
from seceki.models.lorenz96 import Lorenz96Spec
from seceki.models.lorenz96 import lorenz96_rk4
from seceki.models.registry import ModelRegistry
from seceki.utils.log import get_seceki_logger
from seceki.utils.random import Purpose
from seceki.utils.random import RandomStreams

__all__ = ("build_model", "build_truth", "build_measurement", "truth_image")

logger = get_seceki_logger(__name__)

DEFAULT_SPARSE_MAGNITUDES = (2.0, -1.5, 1.0, 0.1)


def _model_spec(cfg: ExperimentConfig):
    kind = cfg.model.kind
    params = cfg.model.params
    if kind == "identity":
        return int(params["n"])
    if kind == "linear":
        if "matrix" in params:
            return LinearModelSpec(a=np.asarray(params["matrix"], dtype=float))
        if "m" not in params:
            raise ConfigError(key="model.params.m", reason="is required without 'matrix'")
        return LinearModelSpec.generated(int(params["m"]), int(params["n"]), seed=int(params.get("seed", cfg.run.rng_seed)))
    if kind == "gaussian_blur":
        return BlurSpec(int(params.get("height", 32)), int(params.get("width", 32)), float(params.get("sigma", 0.7)))
    if kind == "lorenz96":
        values = {name: params[name] for name in ("n_state", "forcing", "dt", "t_final") if name in params}
        if "wavenumbers" in params:
            values["measured_wavenumbers"] = tuple(params["wavenumbers"])
        return Lorenz96Spec(**values)
    return DarcySpec(mesh=int(params.get("mesh", 50)), n_observations=int(params.get("n_observations", 20)))


def build_model(cfg: ExperimentConfig) -> ForwardModel:
    """
    Instantiate the registered forward model named by ``model.kind``.

    Raises:
        ConfigError: If the model parameters are invalid.
    """
    try:
        model_class = ModelRegistry().get(cfg.model.kind)
        model = model_class(_model_spec(cfg))
    except ValidationError as err:
        raise ConfigError(key=f"model.params.{err.field}", value=err.value, reason=err.reason) from err
    except (TypeError, ValueError) as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError(key="model.params", reason=str(err)) from err
    logger.info("Built forward model %r", model)
    return model


def truth_image(cfg: ExperimentConfig) -> ImageBuffer:
    """True image of a deblurring config: the given file resized to the model grid, or the synthetic scene."""
    if cfg.model.kind != "gaussian_blur":
        raise ConfigError(key="truth.kind", value="image", reason="requires model.kind 'gaussian_blur'")
    height = int(cfg.model.params.get("height", 32))
    width = int(cfg.model.params.get("width", 32))
    path = cfg.truth.params.get("path")
    if path is None:
        return synthetic_image(height, width)
    return resize(load_image(path), height, width)


def _lorenz_attractor_state(cfg: ExperimentConfig, seed: int) -> np.ndarray:
    if cfg.model.kind != "lorenz96":
        raise ConfigError(key="truth.kind", value="lorenz96_attractor", reason="requires model.kind 'lorenz96'")
    spec = _model_spec(cfg)
    spin_up = float(cfg.truth.params.get("spin_up", 10.0))
    try:
        spin_spec = dataclasses.replace(spec, t_final=spin_up)
    except ValidationError as err:
        raise ConfigError(key="truth.params.spin_up", value=spin_up, reason=err.reason) from err
    rng = RandomStreams(seed).stream(Purpose.TRUTH)
    x0 = spec.forcing + 0.01 * rng.standard_normal(spec.n_state)
    return lorenz96_rk4(x0, spin_spec)


def build_truth(cfg: ExperimentConfig) -> np.ndarray:
    """
    The true unknown u_true of dimension N.

    Raises:
        ConfigError: If the truth section does not fit the model.
        StorageError: If a truth file cannot be read.
    """
    n = model_input_dim(cfg.model)
    kind = cfg.truth.kind
    params = cfg.truth.params
    seed = int(params.get("seed", cfg.run.rng_seed))

    if kind == "constant":
        truth = np.full(n, float(params.get("value", 1.0)))
    elif kind == "inline":
        truth = np.asarray(params.get("values", []), dtype=float)
    elif kind == "file":
        path = params.get("path")
        if path is None:
            raise ConfigError(key="truth.params.path", reason="is required")
        try:
            truth = np.loadtxt(path, delimiter=",", ndmin=1, dtype=float).ravel()
        except OSError as e:
            raise StorageError(f"Cannot read truth vector: {e}", path=path) from e
        except ValueError as e:
            raise ConfigError(key="truth.params.path", value=path, reason=f"not a numeric column: {e}") from e
    elif kind == "sparse":
        magnitudes = np.asarray(params.get("magnitudes", DEFAULT_SPARSE_MAGNITUDES), dtype=float)
        if magnitudes.ndim != 1 or not 0 < magnitudes.size <= n:
            raise ConfigError(key="truth.params.magnitudes", reason=f"must list between 1 and {n} values")
        rng = RandomStreams(seed).stream(Purpose.TRUTH)
        truth = np.zeros(n)
        truth[rng.choice(n, size=magnitudes.size, replace=False)] = magnitudes
    elif kind == "image":
        truth = truth_image(cfg).flatten()
    elif kind == "lorenz96_attractor":
        truth = _lorenz_attractor_state(cfg, seed)
    else:
        mesh = int(round(np.sqrt(n)))
        if mesh * mesh != n:
            raise ConfigError(key="truth.kind", value=kind, reason="requires a square grid of unknowns")
        truth = square_inclusion(mesh, **params)

    if truth.size != n:
        raise ConfigError(key="truth", value=truth.size, reason=f"has {truth.size} values, the model expects {n}")
    return truth


def build_measurement(cfg: ExperimentConfig, model: ForwardModel, truth: np.ndarray) -> MeasurementModel:
    """y = G(u_true) + eta with eta ~ Normal(0, variance I) drawn from the run seed; eta = 0 for exact data."""
    clean = model(truth)
    measurement = MeasurementModel.diagonal(clean, cfg.obs_variance)
    if not cfg.noisy_data:
        return measurement
    noise = measurement.sample_noise(RandomStreams(cfg.run.rng_seed).stream(Purpose.NOISE))
    return MeasurementModel.diagonal(clean + noise, cfg.obs_variance)
