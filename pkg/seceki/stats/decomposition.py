"""Product decomposition of a covariance into standard deviations and correlations.

    C = V_left R V_right

with V_left, V_right diagonal matrices of standard deviations and R a
correlation matrix. Entries whose row or column standard deviation is zero
have no defined correlation; they are set to 0 so they never drive an update.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from seceki.core.exceptions import StructuralError
from seceki.core.exceptions import ValidationError

__all__ = ("CovarianceDecomposition", "corr_decompose")


@dataclass(frozen=True)
class CovarianceDecomposition:
    """Standard deviations of both variables and their correlation matrix."""

    sd_left: np.ndarray
    sd_right: np.ndarray
    r: np.ndarray

    @property
    def v_left(self) -> np.ndarray:
        return np.diag(self.sd_left)

    @property
    def v_right(self) -> np.ndarray:
        return np.diag(self.sd_right)

    def reconstruct(self, r: np.ndarray | None = None) -> np.ndarray:
        """V_left R V_right, optionally with a replacement correlation matrix."""
        r = self.r if r is None else r
        return np.outer(self.sd_left, self.sd_right) * r


def corr_decompose(c, sd_left, sd_right) -> CovarianceDecomposition:
    """
    Split a covariance into standard deviations and a clamped correlation matrix.

    Raises:
        ValidationError: On negative standard deviations.
        StructuralError: If the shapes do not match.
    """
    c = np.atleast_2d(np.asarray(c, dtype=float))
    sd_left = np.atleast_1d(np.asarray(sd_left, dtype=float))
    sd_right = np.atleast_1d(np.asarray(sd_right, dtype=float))
    if c.shape != (sd_left.size, sd_right.size):
        raise StructuralError(f"Covariance of shape {c.shape} does not match sd sizes ({sd_left.size}, {sd_right.size})")
    for name, sd in (("sd_left", sd_left), ("sd_right", sd_right)):
        if np.any(sd < 0):
            raise ValidationError(field=name, value=float(sd.min()), reason="standard deviations must be >= 0")

    scale = np.outer(sd_left, sd_right)
    r = np.zeros_like(c)
    np.divide(c, scale, out=r, where=scale > 0)
    np.clip(r, -1.0, 1.0, out=r)
    return CovarianceDecomposition(sd_left=sd_left, sd_right=sd_right, r=r)
