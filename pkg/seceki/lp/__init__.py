"""lp-regularized ensemble Kalman inversion through an augmented measurement system."""

from __future__ import annotations

from seceki.lp.augment import AugmentedModel
from seceki.lp.augment import AugmentedProblem
from seceki.lp.augment import augment
from seceki.lp.solver import init_latent_ensemble
from seceki.lp.solver import lp_run
from seceki.lp.transform import RegularizationConfig
from seceki.lp.transform import psi
from seceki.lp.transform import xi

__all__ = (
    "RegularizationConfig",
    "AugmentedModel",
    "AugmentedProblem",
    "psi",
    "xi",
    "augment",
    "init_latent_ensemble",
    "lp_run",
)
