"""Gaussian blur forward model for image deblurring.

The operator unflattens a row-major image, correlates it with a truncated,
normalized Gaussian kernel (radius ceil(4 sigma)) along both axes with
reflect padding, and flattens the result. The kernel is symmetric, so
correlation and convolution coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from seceki.core.exceptions import StructuralError
from seceki.core.exceptions import ValidationError
from seceki.models.base import ForwardModel
from seceki.models.registry import register

__all__ = ("BlurSpec", "GaussianBlurModel", "gaussian_kernel", "gaussian_blur_model")


@dataclass(frozen=True)
class BlurSpec:
    image_height: int
    image_width: int
    sigma_blur: float = 0.7

    def __post_init__(self):
        if self.image_height < 1 or self.image_width < 1:
            raise ValidationError(field="image size", value=(self.image_height, self.image_width), reason="must be positive")
        if not self.sigma_blur > 0:
            raise ValidationError(field="sigma_blur", value=self.sigma_blur, reason="must be > 0")

    @property
    def size(self) -> int:
        return self.image_height * self.image_width


def gaussian_kernel(sigma: float) -> np.ndarray:
    """1-D Gaussian weights on [-ceil(4 sigma), ceil(4 sigma)], summing to 1."""
    radius = math.ceil(4 * sigma)
    offsets = np.arange(-radius, radius + 1, dtype=float)
    weights = np.exp(-0.5 * (offsets / sigma) ** 2)
    return weights / weights.sum()


@register
class GaussianBlurModel(ForwardModel):
    """Linear blur of a flattened height x width image."""

    name = "gaussian_blur"

    def __init__(self, spec: BlurSpec):
        super().__init__(spec.size, spec.size)
        self.spec = spec
        self.kernel = gaussian_kernel(spec.sigma_blur)

    def blur_image(self, image: np.ndarray) -> np.ndarray:
        shape = (self.spec.image_height, self.spec.image_width)
        if image.shape != shape:
            raise StructuralError(f"Image of shape {image.shape} does not match {shape}")
        out = ndimage.correlate1d(image, self.kernel, axis=0, mode="reflect")
        return ndimage.correlate1d(out, self.kernel, axis=1, mode="reflect")

    def perform_evaluate(self, u):
        image = u.reshape(self.spec.image_height, self.spec.image_width)
        return self.blur_image(image).reshape(-1)


def gaussian_blur_model(spec: BlurSpec) -> GaussianBlurModel:
    return GaussianBlurModel(spec)
