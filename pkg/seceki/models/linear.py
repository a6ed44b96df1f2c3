"""Linear forward models: the identity map and dense matrices G(u) = A u."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from seceki.core.exceptions import StructuralError
from seceki.models.base import ForwardModel
from seceki.models.registry import register
from seceki.utils.random import Purpose
from seceki.utils.random import RandomStreams

__all__ = ("LinearModelSpec", "IdentityModel", "LinearModel", "identity_model", "linear_model")


@dataclass(frozen=True, eq=False)
class LinearModelSpec:
    """Dense M x N matrix; ``generated`` draws i.i.d. standard normal entries from a seed."""

    a: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        if a.ndim != 2 or 0 in a.shape:
            raise StructuralError(f"Matrix must be 2-D with positive dimensions, got shape {a.shape}")
        object.__setattr__(self, "a", a)

    @classmethod
    def generated(cls, m: int, n: int, seed: int) -> LinearModelSpec:
        rng = RandomStreams(seed).stream(Purpose.SENSING)
        return cls(a=rng.standard_normal((m, n)), seed=seed)


@register
class IdentityModel(ForwardModel):
    """G(u) = u."""

    name = "identity"

    def __init__(self, n: int):
        super().__init__(n, n)

    def perform_evaluate(self, u):
        return u.copy()


@register
class LinearModel(ForwardModel):
    """G(u) = A u."""

    name = "linear"

    def __init__(self, spec: LinearModelSpec):
        m, n = spec.a.shape
        super().__init__(n, m)
        self.spec = spec

    @property
    def matrix(self) -> np.ndarray:
        return self.spec.a

    def perform_evaluate(self, u):
        return self.spec.a @ u


def identity_model(n: int) -> IdentityModel:
    return IdentityModel(n)


def linear_model(spec: LinearModelSpec) -> LinearModel:
    return LinearModel(spec)
