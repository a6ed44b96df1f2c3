"""End-to-end checks of the preset experiments at their configured scale."""

from __future__ import annotations

import numpy as np
import pytest

from seceki.harness.experiment import run_experiment
from seceki.harness.presets import load_preset
from seceki.models.image import psnr

pytestmark = pytest.mark.slow

NO_SEC = {"run.sec": {"enabled": False, "a": 0.0}}


@pytest.fixture(scope="module")
def preset_run():
    """Run a preset once per (name, sec, ensemble size) and reuse the result within the module."""
    cache = {}

    def runner(name, sec=True, ensemble_size=None):
        key = (name, sec, ensemble_size)
        if key not in cache:
            overrides = {} if sec else dict(NO_SEC)
            if ensemble_size is not None:
                overrides["run.ensemble_size"] = ensemble_size
            cfg = load_preset(name)
            if overrides:
                cfg = cfg.with_overrides(overrides)
            cache[key] = run_experiment(cfg, write=False)
        return cache[key]

    return runner


def top_indices(values, count=3):
    return set(np.argsort(np.abs(values))[-count:])


@pytest.mark.parametrize("name", ["toy", "compressive_sensing", "deblurring", "lorenz96"])
def test_correction_lowers_final_l1_error(preset_run, name):
    sec = preset_run(name).record.final.l1_error
    raw = preset_run(name, sec=False).record.final.l1_error
    assert sec <= raw


def test_compressive_sensing_recovers_support(preset_run):
    result = preset_run("compressive_sensing")
    assert len(result.record) == 20
    assert top_indices(result.record.iterations[14].estimate) == top_indices(result.truth)
    assert result.record.final.l1_error < preset_run("compressive_sensing", sec=False).record.final.l1_error


def test_lorenz96_error_ordering(preset_run):
    large = preset_run("lorenz96", sec=False, ensemble_size=1000).record.final.l1_error
    sec = preset_run("lorenz96").record.final.l1_error
    raw = preset_run("lorenz96", sec=False).record.final.l1_error
    assert large < sec < raw
    assert sec < 2.0 * large


def test_deblurring_correction_beats_raw_update(preset_run):
    sec = preset_run("deblurring")
    raw = preset_run("deblurring", sec=False)
    assert sec.summary["psnr_estimate"] > raw.summary["psnr_estimate"] + 3.0
    assert sec.record.final.data_misfit < raw.record.final.data_misfit
    assert sec.summary["psnr_estimate"] > psnr(np.zeros_like(sec.truth), sec.truth)
    assert sec.record.final.l1_error < sec.record.initial.l1_error


def test_darcy_misfit_reduction(preset_run):
    sec = preset_run("darcy")
    assert sec.truth.size == 625
    assert sec.record.initial.data_misfit >= 10.0 * sec.record.final.data_misfit
    assert sec.record.final.data_misfit <= preset_run("darcy", sec=False).record.final.data_misfit
