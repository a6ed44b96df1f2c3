"""Invariant subspace checks.

Plain EKI keeps every updated member inside the linear span of the previous
members; the sampling error correction can leave it. These helpers measure
how far updated members are from that span.
"""

from __future__ import annotations

import numpy as np

from seceki.core.exceptions import StructuralError
from seceki.eki.problem import Ensemble

__all__ = ("span_residuals", "increment_residuals", "spans_previous")


def span_residuals(prev: Ensemble, next: Ensemble) -> np.ndarray:
    """
    Relative residual of projecting each updated member onto span(prev members).

    Returns ||w - P w|| / ||w|| per member (0 for a zero member).
    """
    if prev.members.shape != next.members.shape:
        raise StructuralError(f"Ensembles differ in shape: {prev.members.shape} vs {next.members.shape}")
    basis = prev.members.T
    coefficients, *_ = np.linalg.lstsq(basis, next.members.T, rcond=None)
    residual = next.members.T - basis @ coefficients
    norms = np.linalg.norm(next.members, axis=1)
    ratio = np.zeros(next.size)
    np.divide(np.linalg.norm(residual, axis=0), norms, out=ratio, where=norms > 0)
    return ratio


def increment_residuals(prev: Ensemble, next: Ensemble) -> np.ndarray:
    """
    Projection residual of each member's increment next - prev, relative to the increment norm.

    A member stays in span(prev) exactly when its increment does; this ratio
    does not shrink with the size of the member itself.
    """
    if prev.members.shape != next.members.shape:
        raise StructuralError(f"Ensembles differ in shape: {prev.members.shape} vs {next.members.shape}")
    basis = prev.members.T
    increments = (next.members - prev.members).T
    coefficients, *_ = np.linalg.lstsq(basis, increments, rcond=None)
    residual = increments - basis @ coefficients
    norms = np.linalg.norm(increments, axis=0)
    ratio = np.zeros(next.size)
    np.divide(np.linalg.norm(residual, axis=0), norms, out=ratio, where=norms > 0)
    return ratio


def spans_previous(prev: Ensemble, next: Ensemble, tol: float) -> np.ndarray:
    """
    Boolean per member: increment projection residual <= tol.

    The residual is taken relative to the increment, so a small step off the
    span of a large member is still detected. An unchanged member is in span.
    """
    return increment_residuals(prev, next) <= tol
