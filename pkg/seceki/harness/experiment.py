"""
Experiment runner.

``run_experiment`` turns a validated configuration into a finished run:

1. builds the forward model, the true unknown and the noisy measurement
   y = G(u_true) + eta (eta drawn from the run seed);
2. runs plain EKI, or the lp-regularized solver when ``reg`` is set;
3. writes the artifacts below into the output directory.

    metrics.csv       iteration,l1_error,data_misfit,wall_time_seconds
    estimate.csv      final estimate, one value per line
    trajectory.csv    first four components of the estimate per iteration
    summary.json      config echo and final metrics
    plot_metrics.py   standalone plotting script for the CSV files
    *.pgm             truth, measurement and estimate (image experiments)
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Any

import numpy as np

from seceki.conf import settings
from seceki.core.exceptions import SecekiError
from seceki.eki.engine import run
from seceki.eki.problem import InverseProblem
from seceki.eki.problem import MeasurementModel
from seceki.eki.problem import RunRecord
from seceki.harness.config import ExperimentConfig
from seceki.harness.factory import build_measurement
from seceki.harness.factory import build_model
from seceki.harness.factory import build_truth
from seceki.harness.metrics import emit_metrics
from seceki.harness.metrics import emit_trajectory
from seceki.harness.metrics import emit_vector
from seceki.harness.plotting import emit_plot_script
from seceki.lp.solver import lp_run
from seceki.models.base import ForwardModel
from seceki.models.image import ImageBuffer
from seceki.models.image import psnr
from seceki.models.image import save_pgm
from seceki.utils.log import get_seceki_logger
from seceki.utils.storage import atomic_write_text
from seceki.utils.storage import to_jsonable

__all__ = ("ExperimentResult", "solve", "resolve_output_dir", "run_experiment")

logger = get_seceki_logger(__name__)


@dataclass(eq=False)
class ExperimentResult:
    config: ExperimentConfig
    record: RunRecord
    truth: np.ndarray
    measurement: MeasurementModel
    output_dir: Path | None
    summary: dict[str, Any]
    artifacts: dict[str, Path] = field(default_factory=dict)


def solve(
    cfg: ExperimentConfig,
    model: ForwardModel,
    measurement: MeasurementModel,
    truth=None,
    threads: int | None = None,
) -> RunRecord:
    """Dispatch to the lp-regularized solver when ``cfg.reg`` is set, plain EKI otherwise."""
    if cfg.reg is not None:
        return lp_run(model, measurement, cfg.reg, cfg.run, truth=truth, threads=threads)
    return run(InverseProblem(model, measurement), cfg.run, truth=truth, threads=threads)


def resolve_output_dir(cfg: ExperimentConfig, out=None) -> Path:
    if out is not None:
        return Path(out)
    if cfg.output_dir is not None:
        return Path(cfg.output_dir)
    return Path(settings.OUTPUT_DIR) / cfg.experiment


def _summary(cfg: ExperimentConfig, record: RunRecord, wall_time: float) -> dict[str, Any]:
    return {
        "experiment": cfg.experiment,
        "config": cfg.raw,
        "n_iterations": len(record),
        "initial_misfit": record.initial.data_misfit,
        "initial_l1_error": record.initial.l1_error,
        "final_misfit": record.final.data_misfit,
        "final_l1_error": record.final.l1_error,
        "wall_time_seconds": wall_time,
    }


def _image_artifacts(cfg, truth, measurement, record, directory: Path | None, summary, artifacts) -> None:
    height = int(cfg.model.params.get("height", 32))
    width = int(cfg.model.params.get("width", 32))
    images = {
        "truth": ImageBuffer.unflatten(truth, height, width),
        "measurement": ImageBuffer.unflatten(measurement.y, height, width),
        "estimate": ImageBuffer.unflatten(record.final.estimate, height, width),
    }
    summary["psnr_measurement"] = psnr(images["measurement"], images["truth"])
    summary["psnr_estimate"] = psnr(images["estimate"], images["truth"])
    if directory is not None:
        for name, image in images.items():
            artifacts[f"{name}.pgm"] = save_pgm(image, directory / f"{name}.pgm")


def run_experiment(cfg: ExperimentConfig, out=None, threads: int | None = None, write: bool = True) -> ExperimentResult:
    """
    Build, solve and (unless ``write`` is False) persist one experiment.

    Raises:
        ConfigError: If the configuration cannot be instantiated.
        NumericalError: If a solve fails; the error carries the experiment name.
        StorageError: If an artifact cannot be written.
    """
    logger.info("Running experiment %s (seed %d)", cfg.experiment, cfg.run.rng_seed)
    started = time.perf_counter()
    try:
        model = build_model(cfg)
        truth = build_truth(cfg)
        measurement = build_measurement(cfg, model, truth)
        record = solve(cfg, model, measurement, truth=truth, threads=threads)
    except SecekiError as err:
        err.extra.setdefault("experiment", cfg.experiment)
        raise
    wall_time = time.perf_counter() - started

    summary = _summary(cfg, record, wall_time)
    directory = resolve_output_dir(cfg, out) if write else None
    artifacts: dict[str, Path] = {}
    if cfg.model.kind == "gaussian_blur":
        _image_artifacts(cfg, truth, measurement, record, directory, summary, artifacts)

    if directory is not None:
        artifacts["metrics.csv"] = emit_metrics(record, directory / "metrics.csv")
        artifacts["estimate.csv"] = emit_vector(record.final.estimate, directory / "estimate.csv")
        artifacts["trajectory.csv"] = emit_trajectory(record, directory / "trajectory.csv")
        artifacts["plot_metrics.py"] = emit_plot_script(directory, cfg.experiment)
        artifacts["summary.json"] = atomic_write_text(
            directory / "summary.json", json.dumps(to_jsonable(summary), indent=2, sort_keys=True) + "\n"
        )
        logger.info("Wrote %d artifacts to %s", len(artifacts), directory)

    return ExperimentResult(
        config=cfg,
        record=record,
        truth=truth,
        measurement=measurement,
        output_dir=directory,
        summary=summary,
        artifacts=artifacts,
    )
