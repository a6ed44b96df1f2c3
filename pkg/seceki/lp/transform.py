"""Component-wise power transforms of the lp-regularized solver.

    psi(x) = sgn(x) |x|^(2/p)        xi(x) = sgn(x) |x|^(p/2) = psi^{-1}(x)

With u = psi(v), |v|^2 = |u|^p component-wise, so an l2 penalty on the
latent variable v is an lp penalty on the unknown u.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from seceki.core.exceptions import ConfigError

__all__ = ("RegularizationConfig", "psi", "xi", "P_MIN", "P_MAX")

P_MIN = 0.5
P_MAX = 2.0


def _check_p(p: float) -> float:
    if not P_MIN <= p <= P_MAX:
        raise ConfigError(key="reg.p", value=p, reason=f"must lie in [{P_MIN}, {P_MAX}]")
    return float(p)


@dataclass(frozen=True)
class RegularizationConfig:
    """Penalty lambda * ||u||_p^p with lambda > 0 and p in [0.5, 2]."""

    p: float
    lam: float

    def __post_init__(self):
        _check_p(self.p)
        if not np.isfinite(self.lam) or self.lam <= 0:
            raise ConfigError(key="reg.lambda", value=self.lam, reason="must be > 0")

    def penalty(self, u) -> float:
        """lambda * ||u||_p^p."""
        return float(self.lam * np.sum(np.abs(np.asarray(u, dtype=float)) ** self.p))


def psi(u, p: float) -> np.ndarray:
    """sgn(x) |x|^(2/p), odd and strictly increasing."""
    p = _check_p(p)
    u = np.asarray(u, dtype=float)
    if p == 2:
        return u.copy()
    return np.sign(u) * np.abs(u) ** (2.0 / p)


def xi(v, p: float) -> np.ndarray:
    """sgn(x) |x|^(p/2), the inverse of :func:`psi`."""
    p = _check_p(p)
    v = np.asarray(v, dtype=float)
    if p == 2:
        return v.copy()
    return np.sign(v) * np.abs(v) ** (p / 2.0)
