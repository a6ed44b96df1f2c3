"""Augmented measurement system of the lp-regularized solver.

The penalty becomes pseudo-data: with z = (y, 0), F(v) = (G(psi(v)), v) and

    Sigma = diag(Gamma, (1/lambda) I_N)

the augmented misfit splits as

    ||z - F(v)||^2_Sigma = ||y - G(psi(v))||^2_Gamma + lambda ||v||^2

so plain EKI on (z, F, Sigma) minimizes the Tikhonov problem in v, which is
the lp problem in u = psi(v).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from seceki.eki.problem import InverseProblem
from seceki.eki.problem import MeasurementModel
from seceki.lp.transform import RegularizationConfig
from seceki.lp.transform import psi
from seceki.models.base import ForwardModel

__all__ = ("AugmentedModel", "AugmentedProblem", "augment")


class AugmentedModel(ForwardModel):
    """F(v) = (G(psi(v)), v); one inner evaluation of G per call."""

    name = "augmented"

    def __init__(self, inner: ForwardModel, p: float):
        super().__init__(inner.input_dim, inner.output_dim + inner.input_dim)
        self.inner = inner
        self.p = p

    def perform_evaluate(self, v):
        return np.concatenate((self.inner(psi(v, self.p)), v))


@dataclass(frozen=True, eq=False)
class AugmentedProblem:
    """Stacked data z, augmented model f and block covariance sigma."""

    z: np.ndarray
    f: AugmentedModel
    sigma: np.ndarray
    measurement: MeasurementModel

    @property
    def problem(self) -> InverseProblem:
        return InverseProblem(self.f, self.measurement)

    def misfit(self, v) -> float:
        """||z - f(v)||^2_Sigma."""
        return self.measurement.misfit(self.f(v))


def _sigma_factor(m: MeasurementModel, n: int, lam: float) -> np.ndarray:
    lower = np.full(n, 1.0 / np.sqrt(lam))
    if m.noise_factor.ndim == 1:
        return np.concatenate((m.noise_factor, lower))
    return block_diag(m.noise_factor, np.diag(lower))


def augment(g: ForwardModel, m: MeasurementModel, reg: RegularizationConfig) -> AugmentedProblem:
    """Build z = (y, 0), f(v) = (G(psi(v)), v) and Sigma = diag(Gamma, I/lambda)."""
    n = g.input_dim
    z = np.concatenate((m.y, np.zeros(n)))
    sigma = block_diag(m.gamma, np.eye(n) / reg.lam)
    measurement = MeasurementModel(
        y=z,
        gamma=sigma,
        gamma_is_diagonal=m.gamma_is_diagonal,
        noise_factor=_sigma_factor(m, n, reg.lam),
    )
    return AugmentedProblem(z=z, f=AugmentedModel(g, reg.p), sigma=sigma, measurement=measurement)
