"""Discrete-time ensemble Kalman inversion with optional sampling error correction."""

from __future__ import annotations

from seceki.eki.engine import EnsembleKalmanInversion
from seceki.eki.engine import init_ensemble
from seceki.eki.engine import kalman_update
from seceki.eki.engine import predict
from seceki.eki.engine import run
from seceki.eki.problem import Ensemble
from seceki.eki.problem import InverseProblem
from seceki.eki.problem import IterationRecord
from seceki.eki.problem import MeasurementModel
from seceki.eki.problem import RunConfig
from seceki.eki.problem import RunRecord
from seceki.eki.subspace import increment_residuals
from seceki.eki.subspace import span_residuals
from seceki.eki.subspace import spans_previous

__all__ = (
    "Ensemble",
    "InverseProblem",
    "IterationRecord",
    "MeasurementModel",
    "RunConfig",
    "RunRecord",
    "EnsembleKalmanInversion",
    "init_ensemble",
    "predict",
    "kalman_update",
    "run",
    "span_residuals",
    "increment_residuals",
    "spans_previous",
)
