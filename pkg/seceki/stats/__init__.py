"""Sample statistics and dense linear-algebra kernels shared by all solvers."""

from __future__ import annotations

from seceki.stats.decomposition import CovarianceDecomposition
from seceki.stats.decomposition import corr_decompose
from seceki.stats.linalg import cholesky_factor
from seceki.stats.linalg import project_psd
from seceki.stats.linalg import spd_solve
from seceki.stats.linalg import weighted_norm_sq
from seceki.stats.sample import SampleSet
from seceki.stats.sample import as_sample_set
from seceki.stats.sample import auto_covariance
from seceki.stats.sample import cross_covariance
from seceki.stats.sample import deviations
from seceki.stats.sample import sample_mean
from seceki.stats.sample import sample_std

__all__ = (
    "SampleSet",
    "CovarianceDecomposition",
    "as_sample_set",
    "sample_mean",
    "deviations",
    "cross_covariance",
    "auto_covariance",
    "sample_std",
    "corr_decompose",
    "cholesky_factor",
    "spd_solve",
    "project_psd",
    "weighted_norm_sq",
)
