"""Experiment harness: configurations, presets, runs, artifacts and diagnostics."""

from __future__ import annotations

from seceki.harness.compare import compare_variants
from seceki.harness.config import ExperimentConfig
from seceki.harness.config import load_config
from seceki.harness.config import parse_config
from seceki.harness.diagnostics import check_subspace_violation
from seceki.harness.diagnostics import correlation_profile
from seceki.harness.diagnostics import correlation_sampling_stddev
from seceki.harness.experiment import ExperimentResult
from seceki.harness.experiment import run_experiment
from seceki.harness.metrics import MetricsRow
from seceki.harness.metrics import emit_metrics
from seceki.harness.presets import load_preset
from seceki.harness.presets import preset_names

__all__ = (
    "ExperimentConfig",
    "ExperimentResult",
    "MetricsRow",
    "parse_config",
    "load_config",
    "load_preset",
    "preset_names",
    "run_experiment",
    "compare_variants",
    "emit_metrics",
    "correlation_sampling_stddev",
    "check_subspace_violation",
    "correlation_profile",
)
