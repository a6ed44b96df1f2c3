"""Lorenz 96 initial-value problem with partial Fourier measurements.

    dx_i/dt = (x_{i+1} - x_{i-2}) x_{i-1} - x_i + F      (indices mod n)

The forward model maps an initial state x0 to selected Fourier coefficients
of the state at t_final, integrated with classical RK4. For wavenumber w the
measurement is

    ((2/n) sum_i x_i cos(2 pi w i / n), (2/n) sum_i x_i sin(2 pi w i / n))

with i = 0, ..., n - 1. The default measures w = 2 .. (n - 1) // 2, which is
w = 2..19 for n = 40: the two largest-scale waves (w = 0, 1) and the Nyquist
mode (no sine part) are left out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from seceki.core.exceptions import NumericalError
from seceki.core.exceptions import StructuralError
from seceki.core.exceptions import ValidationError
from seceki.models.base import ForwardModel
from seceki.models.registry import register

__all__ = (
    "Lorenz96Spec",
    "Lorenz96Model",
    "default_wavenumbers",
    "lorenz96_tendency",
    "lorenz96_rk4",
    "fourier_matrix",
    "fourier_measure",
)


def default_wavenumbers(n: int) -> tuple[int, ...]:
    """w = 2 .. (n - 1) // 2, or w = 1 alone when n is too small to skip it."""
    top = (n - 1) // 2
    return tuple(range(2, top + 1)) if top >= 2 else tuple(range(1, top + 1))


@dataclass(frozen=True)
class Lorenz96Spec:
    n_state: int = 40
    forcing: float = 8.0
    dt: float = 0.01
    t_final: float = 0.5
    measured_wavenumbers: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n_state < 4:
            raise ValidationError(field="n_state", value=self.n_state, reason="must be >= 4")
        if not self.dt > 0 or not self.t_final > 0:
            raise ValidationError(field="dt", value=self.dt, reason="dt and t_final must be > 0")
        steps = round(self.t_final / self.dt)
        if abs(steps * self.dt - self.t_final) > 1e-9 * self.t_final:
            raise ValidationError(field="dt", value=self.dt, reason=f"t_final={self.t_final} is not a multiple of dt")
        wavenumbers = default_wavenumbers(self.n_state) if self.measured_wavenumbers is None else self.measured_wavenumbers
        object.__setattr__(self, "measured_wavenumbers", tuple(int(w) for w in wavenumbers))
        _check_wavenumbers(self.measured_wavenumbers, self.n_state)

    @property
    def n_steps(self) -> int:
        return round(self.t_final / self.dt)

    @property
    def n_measurements(self) -> int:
        return 2 * len(self.measured_wavenumbers)


def _check_wavenumbers(wavenumbers, n: int) -> None:
    if not wavenumbers:
        raise ValidationError(field="measured_wavenumbers", value=wavenumbers, reason="must not be empty")
    for w in wavenumbers:
        if not 1 <= w < n / 2:
            raise ValidationError(field="measured_wavenumbers", value=w, reason=f"must lie in [1, {(n - 1) // 2}]")
    if len(set(wavenumbers)) != len(wavenumbers):
        raise ValidationError(field="measured_wavenumbers", value=wavenumbers, reason="must be distinct")


def lorenz96_tendency(x: np.ndarray, forcing: float) -> np.ndarray:
    return (np.roll(x, -1) - np.roll(x, 2)) * np.roll(x, 1) - x + forcing


def lorenz96_rk4(x0, spec: Lorenz96Spec) -> np.ndarray:
    """
    Integrate from t = 0 to t_final with n_steps classical RK4 steps.

    Raises:
        NumericalError: If the state becomes non-finite.
    """
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (spec.n_state,):
        raise StructuralError(f"Lorenz 96 state must have shape ({spec.n_state},), got {x.shape}")
    h = spec.dt
    f = spec.forcing
    for step in range(spec.n_steps):
        k1 = lorenz96_tendency(x, f)
        k2 = lorenz96_tendency(x + 0.5 * h * k1, f)
        k3 = lorenz96_tendency(x + 0.5 * h * k2, f)
        k4 = lorenz96_tendency(x + h * k3, f)
        x = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise NumericalError(f"Lorenz 96 state blew up at step {step + 1}", iterations=step + 1)
    return x


def fourier_matrix(n: int, wavenumbers) -> np.ndarray:
    """Rows (cos_w, sin_w) for each wavenumber, scaled by 2/n."""
    wavenumbers = tuple(int(w) for w in wavenumbers)
    _check_wavenumbers(wavenumbers, n)
    i = np.arange(n)
    rows = []
    for w in wavenumbers:
        phase = 2.0 * np.pi * w * i / n
        rows.append(np.cos(phase))
        rows.append(np.sin(phase))
    return 2.0 / n * np.vstack(rows)


def fourier_measure(x, wavenumbers) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return fourier_matrix(x.size, wavenumbers) @ x


@register
class Lorenz96Model(ForwardModel):
    """x0 -> Fourier coefficients of x(t_final)."""

    name = "lorenz96"

    def __init__(self, spec: Lorenz96Spec | None = None):
        spec = spec or Lorenz96Spec()
        super().__init__(spec.n_state, spec.n_measurements)
        self.spec = spec
        self.measure = fourier_matrix(spec.n_state, spec.measured_wavenumbers)

    def perform_evaluate(self, u):
        return self.measure @ lorenz96_rk4(u, self.spec)
