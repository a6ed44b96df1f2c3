"""Power-law sampling error correction (SEC)."""

from __future__ import annotations

from seceki.sec.correction import SecConfig
from seceki.sec.correction import correct_correlation_matrix
from seceki.sec.correction import corrected_covariances
from seceki.sec.correction import correction_factor

__all__ = ("SecConfig", "correction_factor", "correct_correlation_matrix", "corrected_covariances")
