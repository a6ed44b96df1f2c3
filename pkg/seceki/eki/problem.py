"""Data model of an ensemble Kalman inversion run.

- MeasurementModel: data y and noise covariance Gamma, y = G(u) + eta.
- InverseProblem: a forward model paired with its measurement model.
- Ensemble: K members of dimension N plus the iteration they belong to.
- RunConfig: ensemble size, horizon, seed, SEC switch and initial Gaussian.
- RunRecord: per-iteration estimates and metrics plus the final ensemble.
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field

import numpy as np

from seceki.core.exceptions import ConfigError
from seceki.core.exceptions import StructuralError
from seceki.core.exceptions import ValidationError
from seceki.models.base import ForwardModel
from seceki.sec.correction import SecConfig
from seceki.stats.linalg import cholesky_factor
from seceki.stats.linalg import weighted_norm_sq
from seceki.utils.storage import JsonSerializer

__all__ = (
    "MeasurementModel",
    "InverseProblem",
    "Ensemble",
    "RunConfig",
    "IterationRecord",
    "RunRecord",
)


@dataclass(frozen=True, eq=False)
class MeasurementModel:
    """
    Measurement vector y (dimension M) with SPD noise covariance Gamma.

    ``noise_factor`` is a lower factor L with L L^T = Gamma used to draw
    perturbations; it is computed when not given (a vector of standard
    deviations when Gamma is flagged diagonal).
    """

    y: np.ndarray
    gamma: np.ndarray
    gamma_is_diagonal: bool = False
    noise_factor: np.ndarray | None = None

    def __post_init__(self):
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        gamma = np.atleast_2d(np.asarray(self.gamma, dtype=float))
        if y.ndim != 1:
            raise StructuralError(f"y must be a vector, got shape {y.shape}")
        if gamma.shape != (y.size, y.size):
            raise StructuralError(f"gamma must be {y.size}x{y.size}, got {gamma.shape}")
        if not np.allclose(gamma, gamma.T, rtol=1e-12, atol=1e-14 * np.abs(gamma).max()):
            raise ValidationError(field="gamma", value="asymmetric", reason="noise covariance must be symmetric")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "gamma", gamma)

        if self.gamma_is_diagonal:
            variances = np.diag(gamma)
            if np.count_nonzero(gamma - np.diag(variances)):
                raise ValidationError(field="gamma", value="off-diagonal", reason="flagged diagonal but is not")
            if np.any(variances <= 0):
                raise ValidationError(field="gamma", value=float(variances.min()), reason="variances must be > 0")
            factor = np.sqrt(variances) if self.noise_factor is None else np.asarray(self.noise_factor, dtype=float)
        else:
            factor = cholesky_factor(gamma) if self.noise_factor is None else np.asarray(self.noise_factor, dtype=float)
        object.__setattr__(self, "noise_factor", factor)

    @classmethod
    def diagonal(cls, y, variance) -> MeasurementModel:
        """Uncorrelated noise with a scalar or per-component variance."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        variance = np.broadcast_to(np.asarray(variance, dtype=float), y.shape)
        return cls(y=y, gamma=np.diag(variance), gamma_is_diagonal=True)

    @property
    def dim(self) -> int:
        return self.y.size

    def sample_noise(self, rng: np.random.Generator) -> np.ndarray:
        """One draw of eta ~ Normal(0, Gamma)."""
        z = rng.standard_normal(self.dim)
        if self.noise_factor.ndim == 1:
            return self.noise_factor * z
        return self.noise_factor @ z

    def misfit(self, prediction) -> float:
        """||y - prediction||^2_Gamma."""
        return weighted_norm_sq(self.y - np.asarray(prediction, dtype=float), self.gamma, self.gamma_is_diagonal)


@dataclass(frozen=True, eq=False)
class InverseProblem:
    """A forward model and the measurement it is inverted against."""

    model: ForwardModel
    measurement: MeasurementModel

    def __post_init__(self):
        if self.model.output_dim != self.measurement.dim:
            raise StructuralError(
                f"Model output dimension {self.model.output_dim} does not match measurement dimension {self.measurement.dim}"
            )

    @property
    def input_dim(self) -> int:
        return self.model.input_dim

    def misfit(self, u) -> float:
        return self.measurement.misfit(self.model(u))


@dataclass(frozen=True, eq=False)
class Ensemble:
    """K members of dimension N stored row-wise, and their iteration index."""

    members: np.ndarray
    iteration_index: int = 0

    def __post_init__(self):
        members = np.asarray(self.members, dtype=float)
        if members.ndim != 2:
            raise StructuralError(f"Ensemble members must be a (K, N) array, got shape {members.shape}")
        if members.shape[0] < 2:
            raise StructuralError(f"An ensemble needs at least 2 members, got {members.shape[0]}")
        if self.iteration_index < 0:
            raise ValidationError(field="iteration_index", value=self.iteration_index, reason="must be >= 0")
        object.__setattr__(self, "members", members)

    @property
    def size(self) -> int:
        return self.members.shape[0]

    @property
    def dim(self) -> int:
        return self.members.shape[1]

    def mean(self) -> np.ndarray:
        return self.members.sum(axis=0) / self.size


def _default_sec() -> SecConfig:
    return SecConfig.off()


@dataclass(frozen=True, eq=False)
class RunConfig:
    """
    Settings of one inversion run.

    ``init_variance`` may be a scalar; it is broadcast to the dimension of
    ``init_mean``. Invalid values raise ConfigError naming the ``run.*`` key.
    """

    ensemble_size: int
    n_iterations: int
    init_mean: np.ndarray
    init_variance: np.ndarray
    rng_seed: int = 0
    sec: SecConfig = field(default_factory=_default_sec)

    def __post_init__(self):
        if int(self.ensemble_size) != self.ensemble_size or self.ensemble_size < 2:
            raise ConfigError(key="run.ensemble_size", value=self.ensemble_size, reason="must be an integer >= 2")
        if int(self.n_iterations) != self.n_iterations or self.n_iterations < 1:
            raise ConfigError(key="run.n_iterations", value=self.n_iterations, reason="must be an integer >= 1")
        if not 0 <= int(self.rng_seed) < 2**64:
            raise ConfigError(key="run.rng_seed", value=self.rng_seed, reason="must be an unsigned 64-bit integer")
        mean = np.atleast_1d(np.asarray(self.init_mean, dtype=float))
        try:
            variance = np.broadcast_to(np.asarray(self.init_variance, dtype=float), mean.shape).copy()
        except ValueError as err:
            raise ConfigError(key="run.init_variance", reason=f"does not match init_mean of size {mean.size}") from err
        if np.any(~np.isfinite(variance)) or np.any(variance <= 0):
            raise ConfigError(key="run.init_variance", value=float(variance.min()), reason="must be > 0")
        object.__setattr__(self, "ensemble_size", int(self.ensemble_size))
        object.__setattr__(self, "n_iterations", int(self.n_iterations))
        object.__setattr__(self, "rng_seed", int(self.rng_seed))
        object.__setattr__(self, "init_mean", mean)
        object.__setattr__(self, "init_variance", variance)

    @property
    def dim(self) -> int:
        return self.init_mean.size

    def replace(self, **changes) -> RunConfig:
        """Copy with some fields changed (validation runs again)."""
        values = {
            "ensemble_size": self.ensemble_size,
            "n_iterations": self.n_iterations,
            "init_mean": self.init_mean,
            "init_variance": self.init_variance,
            "rng_seed": self.rng_seed,
            "sec": self.sec,
        }
        values.update(changes)
        return RunConfig(**values)


@dataclass(eq=False)
class IterationRecord(JsonSerializer):
    """Estimate and metrics after one completed iteration."""

    iteration: int
    estimate: np.ndarray
    l1_error: float | None
    data_misfit: float
    wall_time_seconds: float


@dataclass(eq=False)
class RunRecord(JsonSerializer):
    """
    Trajectory of a run.

    ``initial`` holds the iteration-0 estimate (the initial ensemble mean) and
    its metrics; ``iterations`` has one entry per completed iteration.
    """

    initial: IterationRecord
    iterations: list[IterationRecord] = field(default_factory=list)
    final_ensemble: Ensemble | None = None

    @property
    def final(self) -> IterationRecord:
        return self.iterations[-1] if self.iterations else self.initial

    @property
    def estimates(self) -> np.ndarray:
        return np.vstack([entry.estimate for entry in self.iterations])

    @property
    def misfits(self) -> np.ndarray:
        return np.array([entry.data_misfit for entry in self.iterations])

    @property
    def l1_errors(self) -> np.ndarray:
        return np.array([np.nan if entry.l1_error is None else entry.l1_error for entry in self.iterations])

    def __len__(self):
        return len(self.iterations)

    def serialize(self) -> dict:
        return {
            "initial": self.initial.serialize(),
            "iterations": [entry.serialize() for entry in self.iterations],
        }
