"""Power-law sampling error correction.

Sample correlations from a small ensemble are shrunk element-wise by the
factor s(r) = |r|^a:

    r_sec = s(r) r = sgn(r) |r|^(a + 1)

Perfect correlations (|r| = 1) are untouched, weak and therefore mostly
spurious ones are damped towards zero. The corrected covariances are
reassembled from the standard deviations, so the diagonal of C^{gg} is kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from seceki.core.exceptions import ValidationError
from seceki.stats.decomposition import corr_decompose

__all__ = ("SecConfig", "correction_factor", "correct_correlation_matrix", "corrected_covariances")

_CORRELATION_TOLERANCE = 1e-9
_SD_RELATIVE_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SecConfig:
    """Sampling error correction switch and exponent a >= 0."""

    enabled: bool = False
    exponent_a: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.exponent_a) or self.exponent_a < 0:
            raise ValidationError(field="sec.exponent_a", value=self.exponent_a, reason="must be a finite value >= 0")

    @property
    def active(self) -> bool:
        """True when the correction changes anything."""
        return bool(self.enabled) and self.exponent_a != 0

    @classmethod
    def off(cls) -> SecConfig:
        return cls(enabled=False, exponent_a=0.0)

    @classmethod
    def power(cls, a: float) -> SecConfig:
        return cls(enabled=True, exponent_a=float(a))


def _check_correlations(r: np.ndarray) -> np.ndarray:
    magnitude = np.abs(r)
    if np.any(magnitude > 1 + _CORRELATION_TOLERANCE):
        raise ValidationError(field="r", value=float(magnitude.max()), reason="correlations must satisfy |r| <= 1")
    return np.minimum(magnitude, 1.0)


def _check_exponent(a: float) -> float:
    if not np.isfinite(a) or a < 0:
        raise ValidationError(field="a", value=a, reason="exponent must be a finite value >= 0")
    return float(a)


def correction_factor(r, a: float):
    """s(r) = |r|^a, in [0, 1]; returns a float for scalar input."""
    a = _check_exponent(a)
    magnitude = _check_correlations(np.asarray(r, dtype=float))
    factor = np.ones_like(magnitude) if a == 0 else magnitude**a
    return float(factor) if factor.ndim == 0 else factor


def correct_correlation_matrix(r, a: float) -> np.ndarray:
    """Element-wise sgn(r) |r|^(a + 1); signs are kept and magnitudes never grow."""
    r = np.asarray(r, dtype=float)
    a = _check_exponent(a)
    magnitude = _check_correlations(r)
    if a == 0:
        return r.copy()
    return np.sign(r) * magnitude ** (a + 1)


def corrected_covariances(c_ug, c_gg, sd_u, sd_g, cfg: SecConfig) -> tuple[np.ndarray, np.ndarray]:
    """
    Sampling-error-corrected (C^{ug}_sec, C^{gg}_sec).

    With the correction disabled, or a = 0, the inputs are returned unchanged.

    Raises:
        ValidationError: If ``sd_g`` squared does not match diag(c_gg).
    """
    c_ug = np.atleast_2d(np.asarray(c_ug, dtype=float))
    c_gg = np.atleast_2d(np.asarray(c_gg, dtype=float))
    if not cfg.active:
        return c_ug, c_gg

    sd_u = np.atleast_1d(np.asarray(sd_u, dtype=float))
    sd_g = np.atleast_1d(np.asarray(sd_g, dtype=float))
    diagonal = np.diag(c_gg)
    mismatch = np.abs(sd_g**2 - diagonal)
    if np.any(mismatch > _SD_RELATIVE_TOLERANCE * np.maximum(np.abs(diagonal), np.finfo(float).tiny)):
        raise ValidationError(field="sd_g", value=float(mismatch.max()), reason="sd_g**2 must equal diag(c_gg)")

    ug = corr_decompose(c_ug, sd_u, sd_g)
    gg = corr_decompose(c_gg, sd_g, sd_g)
    r_gg = correct_correlation_matrix(gg.r, cfg.exponent_a)
    r_gg = 0.5 * (r_gg + r_gg.T)
    c_gg_sec = gg.reconstruct(r_gg)
    # zero-variance rows carry r = 0; restore the untouched diagonal
    np.fill_diagonal(c_gg_sec, diagonal)
    return ug.reconstruct(correct_correlation_matrix(ug.r, cfg.exponent_a)), c_gg_sec
