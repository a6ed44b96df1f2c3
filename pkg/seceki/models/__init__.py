"""Forward models for the benchmark inverse problems."""

from __future__ import annotations

from seceki.models.base import ForwardModel
from seceki.models.base import FunctionModel
from seceki.models.blur import BlurSpec
from seceki.models.blur import GaussianBlurModel
from seceki.models.blur import gaussian_blur_model
from seceki.models.blur import gaussian_kernel
from seceki.models.darcy import BoundaryCondition
from seceki.models.darcy import DarcyModel
from seceki.models.darcy import DarcySpec
from seceki.models.darcy import SourceBands
from seceki.models.darcy import darcy_observe
from seceki.models.darcy import darcy_solve
from seceki.models.image import ImageBuffer
from seceki.models.image import load_image
from seceki.models.image import load_pgm
from seceki.models.image import psnr
from seceki.models.image import save_pgm
from seceki.models.image import synthetic_image
from seceki.models.linear import IdentityModel
from seceki.models.linear import LinearModel
from seceki.models.linear import LinearModelSpec
from seceki.models.linear import identity_model
from seceki.models.linear import linear_model
from seceki.models.lorenz96 import Lorenz96Model
from seceki.models.lorenz96 import Lorenz96Spec
from seceki.models.lorenz96 import fourier_measure
from seceki.models.lorenz96 import lorenz96_rk4
from seceki.models.registry import ModelRegistry
from seceki.models.registry import register

__all__ = (
    "ForwardModel",
    "FunctionModel",
    "ModelRegistry",
    "register",
    "LinearModelSpec",
    "IdentityModel",
    "LinearModel",
    "identity_model",
    "linear_model",
    "BlurSpec",
    "GaussianBlurModel",
    "gaussian_kernel",
    "gaussian_blur_model",
    "Lorenz96Spec",
    "Lorenz96Model",
    "lorenz96_rk4",
    "fourier_measure",
    "DarcySpec",
    "DarcyModel",
    "BoundaryCondition",
    "SourceBands",
    "darcy_solve",
    "darcy_observe",
    "ImageBuffer",
    "load_pgm",
    "save_pgm",
    "load_image",
    "psnr",
    "synthetic_image",
)
