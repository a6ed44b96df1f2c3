"""Darcy flow on the unit square.

    -div(k grad p) = f   on (0, 1)^2,   k = exp(u)

Cell-centered finite volumes on an n x n grid (h = 1/n). Fields are stored
as (n, n) arrays indexed ``[j, i]`` with j along x2 and i along x1, and
flattened row-major, so the unknown ``u[j * n + i]`` is the log-permeability
of the cell centered at ((i + 1/2) h, (j + 1/2) h).

Interior faces use the harmonic mean of the two neighbouring permeabilities.
A Dirichlet face sits half a cell from the center and contributes
2 k_P (p_P - p_b); a flux face carries a prescribed inflow q = k dp/dn_out
and adds q h to the right-hand side. The resulting matrix is symmetric and,
with at least one Dirichlet side, positive definite.

Observations are bilinear interpolations of the cell-centered pressures on a
uniform interior lattice, with linear extrapolation in the half cell next to
the boundary.
"""

from __future__ import annotations

from collections.abc import Callable
from collections.abc import Mapping
from dataclasses import dataclass
from dataclasses import field
from types import MappingProxyType

import numpy as np
from scipy import sparse
from scipy.ndimage import gaussian_filter
from scipy.sparse.linalg import cg
from scipy.sparse.linalg import spsolve

from seceki.core.exceptions import NumericalError
from seceki.core.exceptions import StructuralError
from seceki.core.exceptions import ValidationError
from seceki.models.base import ForwardModel
from seceki.models.registry import register
from seceki.utils.log import get_seceki_logger

__all__ = (
    "SIDES",
    "BoundaryCondition",
    "SourceBands",
    "DarcySpec",
    "DarcyModel",
    "darcy_solve",
    "darcy_observe",
    "observation_matrix",
    "square_inclusion",
    "smoothed_initial_mean",
)

logger = get_seceki_logger(__name__)

SIDES = ("left", "right", "bottom", "top")

FieldFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BoundaryCondition:
    """
    Condition on one side of the square.

    ``kind`` is ``"dirichlet"`` (value = pressure) or ``"flux"`` (value =
    inflow k dp/dn_out). ``value`` is a constant or a callable of (x1, x2).
    """

    kind: str
    value: float | FieldFunction = 0.0

    def __post_init__(self):
        if self.kind not in ("dirichlet", "flux"):
            raise ValidationError(field="boundary.kind", value=self.kind, reason="must be 'dirichlet' or 'flux'")

    @classmethod
    def dirichlet(cls, value) -> BoundaryCondition:
        return cls("dirichlet", value)

    @classmethod
    def flux(cls, value) -> BoundaryCondition:
        return cls("flux", value)

    @classmethod
    def no_flux(cls) -> BoundaryCondition:
        return cls("flux", 0.0)

    def evaluate(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        if callable(self.value):
            return np.broadcast_to(np.asarray(self.value(x1, x2), dtype=float), x1.shape)
        return np.full(x1.shape, float(self.value))


@dataclass(frozen=True)
class SourceBands:
    """Piecewise-constant source in x2: ``values[b]`` on band b, closed at the upper edge."""

    values: tuple[float, ...] = (0.0, 137.0, 274.0)
    edges: tuple[float, ...] = (4.0 / 6.0, 5.0 / 6.0)

    def __post_init__(self):
        if len(self.values) != len(self.edges) + 1:
            raise ValidationError(field="source", value=self.values, reason="need one more value than band edges")
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValidationError(field="source.edges", value=self.edges, reason="must be increasing")

    def __call__(self, x1, x2) -> np.ndarray:
        band = np.searchsorted(np.asarray(self.edges), x2, side="left")
        return np.asarray(self.values, dtype=float)[band]


def _default_boundary() -> Mapping[str, BoundaryCondition]:
    return {
        "left": BoundaryCondition.flux(500.0),
        "right": BoundaryCondition.no_flux(),
        "bottom": BoundaryCondition.dirichlet(100.0),
        "top": BoundaryCondition.no_flux(),
    }


@dataclass(frozen=True, eq=False)
class DarcySpec:
    mesh: int = 50
    source: SourceBands | FieldFunction = field(default_factory=SourceBands)
    boundary: Mapping[str, BoundaryCondition] = field(default_factory=_default_boundary)
    n_observations: int = 20
    rtol: float = 1e-10

    def __post_init__(self):
        if self.mesh < 2:
            raise ValidationError(field="mesh", value=self.mesh, reason="must be >= 2")
        if self.n_observations < 1:
            raise ValidationError(field="n_observations", value=self.n_observations, reason="must be >= 1")
        if set(self.boundary) != set(SIDES):
            raise ValidationError(field="boundary", value=sorted(self.boundary), reason=f"must name exactly {SIDES}")
        if not any(bc.kind == "dirichlet" for bc in self.boundary.values()):
            raise ValidationError(field="boundary", value="flux only", reason="at least one side must be Dirichlet")
        object.__setattr__(self, "boundary", MappingProxyType(dict(self.boundary)))

    @property
    def h(self) -> float:
        return 1.0 / self.mesh

    @property
    def n_cells(self) -> int:
        return self.mesh * self.mesh

    @property
    def cell_centers(self) -> np.ndarray:
        return (np.arange(self.mesh) + 0.5) * self.h

    @property
    def observation_points(self) -> tuple[np.ndarray, np.ndarray]:
        """(x1, x2) of the lattice, flattened row-major with x2 outer."""
        m = self.n_observations
        axis = np.arange(1, m + 1) / (m + 1)
        x1, x2 = np.meshgrid(axis, axis)
        return x1.ravel(), x2.ravel()


def _boundary_cells(n: int, side: str) -> tuple:
    return {
        "left": (slice(None), 0),
        "right": (slice(None), n - 1),
        "bottom": (0, slice(None)),
        "top": (n - 1, slice(None)),
    }[side]


def _face_coordinates(side: str, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    zeros = np.zeros_like(centers)
    if side == "left":
        return zeros, centers
    if side == "right":
        return zeros + 1.0, centers
    if side == "bottom":
        return centers, zeros
    return centers, zeros + 1.0


def _assemble(k: np.ndarray, spec: DarcySpec) -> tuple[sparse.csr_matrix, np.ndarray]:
    n = spec.mesh
    h = spec.h
    centers = spec.cell_centers
    index = np.arange(n * n).reshape(n, n)

    kx = 2.0 * k[:, :-1] * k[:, 1:] / (k[:, :-1] + k[:, 1:])
    ky = 2.0 * k[:-1, :] * k[1:, :] / (k[:-1, :] + k[1:, :])

    diag = np.zeros((n, n))
    diag[:, :-1] += kx
    diag[:, 1:] += kx
    diag[:-1, :] += ky
    diag[1:, :] += ky

    x1, x2 = np.meshgrid(centers, centers)
    rhs = np.asarray(spec.source(x1, x2), dtype=float) * h * h
    rhs = np.broadcast_to(rhs, (n, n)).copy()

    for side in SIDES:
        bc = spec.boundary[side]
        cells = _boundary_cells(n, side)
        value = bc.evaluate(*_face_coordinates(side, centers))
        if bc.kind == "dirichlet":
            diag[cells] += 2.0 * k[cells]
            rhs[cells] += 2.0 * k[cells] * value
        else:
            rhs[cells] += value * h

    rows = np.concatenate((index.ravel(), index[:, :-1].ravel(), index[:, 1:].ravel(), index[:-1, :].ravel(), index[1:, :].ravel()))
    cols = np.concatenate((index.ravel(), index[:, 1:].ravel(), index[:, :-1].ravel(), index[1:, :].ravel(), index[:-1, :].ravel()))
    data = np.concatenate((diag.ravel(), -kx.ravel(), -kx.ravel(), -ky.ravel(), -ky.ravel()))
    matrix = sparse.coo_matrix((data, (rows, cols)), shape=(n * n, n * n)).tocsr()
    return matrix, rhs.ravel()


def _relative_residual(matrix, p, rhs) -> float:
    scale = np.linalg.norm(rhs) or 1.0
    return float(np.linalg.norm(matrix @ p - rhs) / scale)


def darcy_solve(log_k, spec: DarcySpec) -> np.ndarray:
    """
    Solve for the cell-centered pressure given the log-permeability.

    Returns:
        Pressure field of shape (mesh, mesh), indexed [x2, x1].

    Raises:
        ValidationError: If ``log_k`` is not finite.
        NumericalError: If the linear solve misses the residual tolerance.
    """
    n = spec.mesh
    log_k = np.asarray(log_k, dtype=float)
    if log_k.size != n * n:
        raise StructuralError(f"log-permeability must have {n * n} values, got {log_k.size}")
    if not np.all(np.isfinite(log_k)):
        raise ValidationError(field="log_k", value="non-finite", reason="log-permeability must be finite")

    matrix, rhs = _assemble(np.exp(log_k.reshape(n, n)), spec)
    p = spsolve(matrix, rhs)
    residual = _relative_residual(matrix, p, rhs) if np.all(np.isfinite(p)) else np.inf
    if residual > spec.rtol:
        logger.debug("Direct Darcy solve residual %.3e, refining with CG", residual)
        x0 = p if np.all(np.isfinite(p)) else None
        p, info = cg(matrix, rhs, x0=x0, rtol=spec.rtol, maxiter=10 * n * n)
        if info != 0:
            raise NumericalError("Darcy linear solve did not converge", iterations=info)
        residual = _relative_residual(matrix, p, rhs)
        if residual > 10 * spec.rtol:
            raise NumericalError(f"Darcy residual {residual:.3e} above tolerance {spec.rtol:.1e}", iterations=10 * n * n)
    return p.reshape(n, n)


def _linear_weights(x: np.ndarray, n: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    s = x / h - 0.5
    lower = np.clip(np.floor(s).astype(int), 0, n - 2)
    return lower, s - lower


def observation_matrix(spec: DarcySpec) -> sparse.csr_matrix:
    """Sparse bilinear interpolation from cell centers to the observation lattice."""
    n = spec.mesh
    x1, x2 = spec.observation_points
    i0, t1 = _linear_weights(x1, n, spec.h)
    j0, t2 = _linear_weights(x2, n, spec.h)
    rows = np.repeat(np.arange(x1.size), 4)
    cols = np.column_stack((j0 * n + i0, j0 * n + i0 + 1, (j0 + 1) * n + i0, (j0 + 1) * n + i0 + 1)).ravel()
    data = np.column_stack(((1 - t1) * (1 - t2), t1 * (1 - t2), (1 - t1) * t2, t1 * t2)).ravel()
    return sparse.csr_matrix((data, (rows, cols)), shape=(x1.size, n * n))


def darcy_observe(p, spec: DarcySpec) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size != spec.n_cells:
        raise StructuralError(f"Pressure field must have {spec.n_cells} values, got {p.size}")
    return observation_matrix(spec) @ p


def square_inclusion(mesh: int, lower: float = 0.25, upper: float = 0.75, value: float = 1.0) -> np.ndarray:
    """Log-permeability equal to ``value`` on [lower, upper]^2 and 0 elsewhere, flattened."""
    centers = (np.arange(mesh) + 0.5) / mesh
    inside = (centers >= lower) & (centers <= upper)
    return (value * np.outer(inside, inside)).astype(float).ravel()


def smoothed_initial_mean(truth, mesh: int, sigma: float = 5.0, reference_mesh: int = 50) -> np.ndarray:
    """Gaussian-filtered truth; ``sigma`` is in cells of the reference mesh."""
    field_ = np.asarray(truth, dtype=float).reshape(mesh, mesh)
    return gaussian_filter(field_, sigma=sigma * mesh / reference_mesh).ravel()


@register
class DarcyModel(ForwardModel):
    """Log-permeability -> pressure observations."""

    name = "darcy"

    def __init__(self, spec: DarcySpec | None = None):
        spec = spec or DarcySpec()
        super().__init__(spec.n_cells, spec.n_observations**2)
        self.spec = spec
        self.observe = observation_matrix(spec)

    def perform_evaluate(self, u):
        return self.observe @ darcy_solve(u, self.spec).ravel()
