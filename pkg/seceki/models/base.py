"""Forward models

Defines the base class for the maps G: R^N -> R^M the solver treats as black
boxes. Subclasses implement ``perform_evaluate``; calling the model validates
input and output dimensions, counts evaluations and wraps the result in a
float array.

Forward models must be pure and reentrant: the ensemble sweep calls one
instance from several threads at once.
"""

from __future__ import annotations

import threading
from abc import ABC
from abc import abstractmethod

import numpy as np

from seceki.core.exceptions import StructuralError

__all__ = ("ForwardModel", "FunctionModel")


class ForwardModel(ABC):
    """
    Abstract base class for forward models.

    Attributes:
        input_dim (int): Dimension N of the unknown.
        output_dim (int): Dimension M of the prediction.
        evaluations (int): Number of completed evaluations (thread-safe counter).
    """

    name: str = "forward"

    def __init__(self, input_dim: int, output_dim: int):
        if input_dim < 1 or output_dim < 1:
            raise StructuralError(f"Model dimensions must be positive, got N={input_dim}, M={output_dim}")
        self.input_dim = int(input_dim)
        self.output_dim = int(output_dim)
        self._evaluations = 0
        self._lock = threading.Lock()

    @property
    def evaluations(self) -> int:
        return self._evaluations

    def reset_counter(self) -> None:
        with self._lock:
            self._evaluations = 0

    def __call__(self, u) -> np.ndarray:
        return self.evaluate(u)

    def evaluate(self, u) -> np.ndarray:
        """
        Evaluate G(u).

        Raises:
            StructuralError: If ``u`` or the output has the wrong dimension.
        """
        u = np.asarray(u, dtype=float)
        if u.shape != (self.input_dim,):
            raise StructuralError(f"{self.name} expects input of shape ({self.input_dim},), got {u.shape}")
        out = np.asarray(self.perform_evaluate(u), dtype=float).reshape(-1)
        if out.size != self.output_dim:
            raise StructuralError(f"{self.name} returned {out.size} values, declared {self.output_dim}")
        with self._lock:
            self._evaluations += 1
        return out

    @abstractmethod
    def perform_evaluate(self, u: np.ndarray) -> np.ndarray:
        """Actual model evaluation. Must be implemented by subclass."""
        raise NotImplementedError("`perform_evaluate()` must be implemented.")

    def __repr__(self):
        return f"<{self.__class__.__name__} N={self.input_dim} M={self.output_dim}>"


class FunctionModel(ForwardModel):
    """Wrap a plain callable as a forward model."""

    def __init__(self, func, input_dim: int, output_dim: int, name: str = "function"):
        super().__init__(input_dim, output_dim)
        self.func = func
        self.name = name

    def perform_evaluate(self, u):
        return self.func(u)
