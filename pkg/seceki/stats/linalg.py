"""Dense symmetric positive definite solves.

The Kalman gain never forms an explicit inverse: systems with C^{gg} + Gamma
are solved through a Cholesky factorization from LAPACK. A corrected C^{gg}
that lost positive semidefiniteness is projected back with ``project_psd``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_solve
from scipy.linalg import eigh
from scipy.linalg import lapack

from seceki.core.exceptions import NumericalError
from seceki.core.exceptions import StructuralError

__all__ = ("cholesky_factor", "spd_solve", "project_psd", "weighted_norm_sq")


def cholesky_factor(a) -> np.ndarray:
    """
    Lower Cholesky factor L with a = L L^T.

    Raises:
        NumericalError: If a is not positive definite; ``pivot`` is the
            1-based index of the failing leading minor.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.shape[0] != a.shape[1]:
        raise StructuralError(f"Matrix must be square, got {a.shape}")
    factor, info = lapack.dpotrf(a, lower=1, clean=1)
    if info > 0:
        raise NumericalError(f"Matrix is not positive definite (leading minor {info})", pivot=int(info))
    if info < 0:
        raise NumericalError(f"Illegal argument {-info} passed to dpotrf")
    return factor


def spd_solve(a, b) -> np.ndarray:
    """
    Solve a X = b for symmetric positive definite a.

    ``b`` may be a vector or a matrix with one right-hand side per column; the
    result has the shape of ``b``.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float)
    if b.shape[0] != a.shape[0]:
        raise StructuralError(f"Right-hand side has {b.shape[0]} rows, matrix has {a.shape[0]}")
    factor = cholesky_factor(a)
    return cho_solve((factor, True), b)


def project_psd(a) -> np.ndarray:
    """
    Nearest symmetric positive semidefinite matrix in the Frobenius norm.

    The symmetric part of ``a`` is diagonalized and its negative eigenvalues
    are clipped to zero.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.shape[0] != a.shape[1]:
        raise StructuralError(f"Matrix must be square, got {a.shape}")
    eigenvalues, vectors = eigh(0.5 * (a + a.T))
    projected = (vectors * np.maximum(eigenvalues, 0.0)) @ vectors.T
    return 0.5 * (projected + projected.T)


def weighted_norm_sq(residual, gamma, diagonal: bool = False) -> float:
    """<r, gamma^{-1} r>, the squared gamma-weighted norm."""
    residual = np.asarray(residual, dtype=float)
    if diagonal:
        return float(np.sum(residual**2 / np.diag(gamma)))
    return float(residual @ spd_solve(gamma, residual))
