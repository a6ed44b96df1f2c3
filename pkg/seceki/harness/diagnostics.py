"""
Diagnostics of the sampling error the correction targets.

- correlation_sampling_stddev: Monte-Carlo spread of the sample correlation
  of a bivariate normal for a given true correlation and sample size.
- check_subspace_violation: whether one corrected update leaves the span of
  the previous ensemble, on a configured problem or on a built-in R^4 case.
- correlation_profile: raw and corrected sample correlations between one
  measured pixel and the unknowns on the same image column.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from seceki.core.exceptions import ConfigError
from seceki.core.exceptions import ValidationError
from seceki.eki.engine import init_ensemble
from seceki.eki.engine import kalman_update
from seceki.eki.engine import predict
from seceki.eki.problem import Ensemble
from seceki.eki.problem import InverseProblem
from seceki.eki.problem import MeasurementModel
from seceki.eki.subspace import increment_residuals
from seceki.eki.subspace import span_residuals
from seceki.harness.config import ExperimentConfig
from seceki.harness.factory import build_measurement
from seceki.harness.factory import build_model
from seceki.harness.factory import build_truth
from seceki.models.base import FunctionModel
from seceki.sec.correction import SecConfig
from seceki.sec.correction import correct_correlation_matrix
from seceki.stats.decomposition import corr_decompose
from seceki.stats.sample import cross_covariance
from seceki.stats.sample import sample_std
from seceki.utils.log import get_seceki_logger
from seceki.utils.random import Purpose
from seceki.utils.random import RandomStreams
from seceki.utils.storage import JsonSerializer

__all__ = (
    "correlation_sampling_stddev",
    "SubspaceReport",
    "r4_example",
    "subspace_report",
    "check_subspace_violation",
    "CorrelationProfile",
    "correlation_profile",
)

logger = get_seceki_logger(__name__)


def correlation_sampling_stddev(true_r: float, k: int, n_trials: int, seed: int = 0) -> float:
    """Standard deviation over ``n_trials`` of the sample correlation of K bivariate-normal draws."""
    if not -1 < true_r < 1:
        raise ValidationError(field="true_r", value=true_r, reason="must satisfy |r| < 1")
    if k < 3:
        raise ValidationError(field="k", value=k, reason="must be >= 3")
    if n_trials < 2:
        raise ValidationError(field="n_trials", value=n_trials, reason="must be >= 2")

    rng = RandomStreams(seed).stream(Purpose.DIAGNOSTIC, k)
    z = rng.standard_normal((2, n_trials, k))
    x = z[0]
    y = true_r * z[0] + np.sqrt(1.0 - true_r**2) * z[1]
    x = x - x.mean(axis=1, keepdims=True)
    y = y - y.mean(axis=1, keepdims=True)
    r = np.einsum("tk,tk->t", x, y) / np.sqrt(np.einsum("tk,tk->t", x, x) * np.einsum("tk,tk->t", y, y))
    return float(r.std())


@dataclass(eq=False)
class SubspaceReport(JsonSerializer):
    """
    Per-member span residuals of one update.

    ``member_residuals`` are relative to the updated member norm,
    ``increment_residuals`` to the norm of the member's increment.
    A member leaves the span when its increment residual exceeds ``tol``.
    """

    a: float
    tol: float
    member_residuals: np.ndarray
    increment_residuals: np.ndarray

    @property
    def violated(self) -> np.ndarray:
        return self.increment_residuals > self.tol

    @property
    def any_violation(self) -> bool:
        return bool(np.any(self.violated))


def r4_example() -> tuple[InverseProblem, Ensemble]:
    """N = 4, M = 1, K = 3: G(u) = u_1, y = 2, noise variance 7/9."""
    members = np.array(
        [
            [1.0, -1.0, 0.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    model = FunctionModel(lambda u: u[:1], input_dim=4, output_dim=1, name="first_component")
    measurement = MeasurementModel.diagonal([2.0], 7.0 / 9.0)
    return InverseProblem(model, measurement), Ensemble(members)


def subspace_report(
    problem: InverseProblem,
    ensemble: Ensemble,
    a: float,
    streams: RandomStreams | None = None,
    tol: float = 1e-8,
) -> SubspaceReport:
    """Apply one update with exponent ``a`` and measure how far members move off span(previous)."""
    preds = predict(ensemble, problem.model, threads=1)
    updated = kalman_update(ensemble, preds, problem.measurement, SecConfig.power(a), streams)
    return SubspaceReport(
        a=float(a),
        tol=tol,
        member_residuals=span_residuals(ensemble, updated),
        increment_residuals=increment_residuals(ensemble, updated),
    )


def check_subspace_violation(cfg: ExperimentConfig | None, a: float, tol: float = 1e-8) -> SubspaceReport:
    """
    One corrected update on the configured problem, or on the R^4 example when ``cfg`` is None.

    The R^4 example uses zero perturbations.

    Raises:
        ConfigError: If the configured ensemble is not smaller than the unknown dimension.
    """
    if cfg is None:
        problem, ensemble = r4_example()
        report = subspace_report(problem, ensemble, a, None, tol)
    else:
        if cfg.run.ensemble_size >= cfg.run.dim:
            raise ConfigError(
                key="run.ensemble_size",
                value=cfg.run.ensemble_size,
                reason=f"the subspace check needs K < N = {cfg.run.dim}",
            )
        model = build_model(cfg)
        problem = InverseProblem(model, build_measurement(cfg, model, build_truth(cfg)))
        report = subspace_report(problem, init_ensemble(cfg.run), a, RandomStreams(cfg.run.rng_seed), tol)
    logger.info("Subspace check a=%g: %d of %d members leave the span", a, int(report.violated.sum()), report.violated.size)
    return report


@dataclass(eq=False)
class CorrelationProfile(JsonSerializer):
    pixel: tuple[int, int]
    a: float
    index: np.ndarray
    raw: np.ndarray
    corrected: np.ndarray


def correlation_profile(cfg: ExperimentConfig, pixel: tuple[int, int], a: float | None = None) -> CorrelationProfile:
    """
    Sample correlations between the measurement at ``pixel`` and the unknowns (i, pixel[1]).

    Uses the initial ensemble and its predictions; ``a`` defaults to the
    configured exponent.

    Raises:
        ConfigError: If the model is not an image model or the pixel is outside it.
    """
    if cfg.model.kind != "gaussian_blur":
        raise ConfigError(key="model.kind", value=cfg.model.kind, reason="the correlation profile needs an image model")
    height = int(cfg.model.params.get("height", 32))
    width = int(cfg.model.params.get("width", 32))
    row, col = pixel
    if not (0 <= row < height and 0 <= col < width):
        raise ConfigError(key="pixel", value=pixel, reason=f"outside the {height}x{width} image")
    a = cfg.run.sec.exponent_a if a is None else float(a)

    model = build_model(cfg)
    ensemble = init_ensemble(cfg.run)
    preds = predict(ensemble, model, threads=1).members
    measured = preds[:, [row * width + col]]
    column = np.arange(height) * width + col
    unknowns = ensemble.members[:, column]

    raw = corr_decompose(cross_covariance(unknowns, measured), sample_std(unknowns), sample_std(measured)).r[:, 0]
    return CorrelationProfile(pixel=(row, col), a=a, index=np.arange(height), raw=raw, corrected=correct_correlation_matrix(raw, a))
