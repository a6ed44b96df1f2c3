"""Sample sets and their first and second moments.

Covariances use the 1/K normalization throughout:

    C^{ug} = (1/K) sum_k (u_k - u_bar) (g_k - g_bar)^T
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from seceki.core.exceptions import StructuralError

__all__ = (
    "SampleSet",
    "as_sample_set",
    "sample_mean",
    "deviations",
    "cross_covariance",
    "auto_covariance",
    "sample_std",
)


@dataclass(frozen=True)
class SampleSet:
    """
    K samples of dimension D, stored row-wise as a (K, D) float array.

    Raises:
        StructuralError: If fewer than two members are given or the members
            do not share one dimension.
    """

    members: np.ndarray

    def __post_init__(self):
        members = self.members
        if isinstance(members, np.ndarray):
            array = np.asarray(members, dtype=float)
        else:
            rows = [np.atleast_1d(np.asarray(m, dtype=float)) for m in members]
            dims = {row.shape for row in rows}
            if len(dims) > 1:
                raise StructuralError(f"Members have differing dimensions {sorted(d[0] for d in dims)}")
            array = np.vstack(rows) if rows else np.empty((0, 0))
        if array.ndim == 1:
            array = array[:, np.newaxis]
        if array.ndim != 2:
            raise StructuralError(f"Sample array must be 2-D (K, D), got shape {array.shape}")
        if array.shape[0] < 2:
            raise StructuralError(f"A sample set needs at least 2 members, got {array.shape[0]}")
        object.__setattr__(self, "members", array)

    @property
    def size(self) -> int:
        """Number of members K."""
        return self.members.shape[0]

    @property
    def dim(self) -> int:
        """Member dimension D."""
        return self.members.shape[1]

    @classmethod
    def from_members(cls, members: Iterable) -> SampleSet:
        return cls(list(members))

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(self.members)


def as_sample_set(value) -> SampleSet:
    """Accept a SampleSet, a (K, D) array or a list of vectors."""
    return value if isinstance(value, SampleSet) else SampleSet(value)


def sample_mean(s) -> np.ndarray:
    """Arithmetic mean (1/K) sum_k s_k."""
    s = as_sample_set(s)
    return s.members.sum(axis=0) / s.size


def deviations(s) -> np.ndarray:
    """Members minus the sample mean, shape (K, D)."""
    s = as_sample_set(s)
    return s.members - sample_mean(s)


def cross_covariance(u, g) -> np.ndarray:
    """
    Cross-covariance C^{ug} of shape (D_u, D_g) with 1/K normalization.

    Raises:
        StructuralError: If the two sets have different sizes K.
    """
    u = as_sample_set(u)
    g = as_sample_set(g)
    if u.size != g.size:
        raise StructuralError(f"Ensemble size mismatch: {u.size} vs {g.size}")
    return deviations(u).T @ deviations(g) / u.size


def auto_covariance(g) -> np.ndarray:
    """Auto-covariance C^{gg}; symmetric positive semidefinite."""
    g = as_sample_set(g)
    dev = deviations(g)
    cov = dev.T @ dev / g.size
    return 0.5 * (cov + cov.T)


def sample_std(s) -> np.ndarray:
    """Per-component standard deviations, the square root of diag(C^{ss})."""
    s = as_sample_set(s)
    dev = deviations(s)
    return np.sqrt(np.einsum("kd,kd->d", dev, dev) / s.size)
