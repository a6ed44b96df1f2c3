"""Built-in experiment presets.

Each preset is a configuration document accepted by ``parse_config``. The
deblurring and Darcy presets run at desk scale (32 x 32 image, 25 x 25 mesh);
``darcy_fine`` uses the 50 x 50 mesh.
"""

from __future__ import annotations

import copy
from typing import Any

from seceki.core.exceptions import ConfigError
from seceki.harness.config import ExperimentConfig
from seceki.harness.config import parse_config

__all__ = ("PRESETS", "preset_names", "preset_document", "load_preset")


def _toy() -> dict[str, Any]:
    n = 100
    return {
        "experiment": "toy",
        "run": {
            "ensemble_size": 50,
            "n_iterations": 20,
            "rng_seed": 0,
            "init_mean": [0.0] + [1.0] * (n - 1),
            "init_variance": 0.1,
            "sec": {"enabled": True, "a": 1.0},
        },
        "model": {"kind": "identity", "params": {"n": n}},
        "measurement": {"variance": 0.1, "noise": False},
        "truth": {"kind": "constant", "params": {"value": 1.0}},
    }


def _compressive_sensing() -> dict[str, Any]:
    return {
        "experiment": "compressive_sensing",
        "run": {
            "ensemble_size": 50,
            "n_iterations": 20,
            "rng_seed": 0,
            "init_mean": 0.0,
            "init_variance": 1.0,
            "sec": {"enabled": True, "a": 1.0},
        },
        "reg": {"p": 1.0, "lambda": 50.0},
        "model": {"kind": "linear", "params": {"m": 30, "n": 100}},
        "measurement": {"variance": 1e-2},
        "truth": {"kind": "sparse", "params": {"magnitudes": [2.0, -1.5, 1.0, 0.1]}},
    }


def _deblurring() -> dict[str, Any]:
    return {
        "experiment": "deblurring",
        "run": {
            "ensemble_size": 50,
            "n_iterations": 25,
            "rng_seed": 0,
            "init_mean": 0.0,
            "init_variance": 2e-4,
            "sec": {"enabled": True, "a": 3.0},
        },
        "model": {"kind": "gaussian_blur", "params": {"height": 32, "width": 32, "sigma": 0.7}},
        "measurement": {"variance": 1e-4},
        "truth": {"kind": "image", "params": {}},
    }


def _lorenz96() -> dict[str, Any]:
    return {
        "experiment": "lorenz96",
        "run": {
            "ensemble_size": 30,
            "n_iterations": 20,
            "rng_seed": 0,
            "init_mean": 0.0,
            "init_variance": 1.0,
            "sec": {"enabled": True, "a": 1.0},
        },
        "reg": {"p": 2.0, "lambda": 0.1},
        "model": {"kind": "lorenz96", "params": {"n_state": 40, "forcing": 8.0, "dt": 0.01, "t_final": 0.5}},
        "measurement": {"variance": 1e-2},
        "truth": {"kind": "lorenz96_attractor", "params": {"spin_up": 10.0}},
    }


def _darcy(mesh: int = 25) -> dict[str, Any]:
    return {
        "experiment": "darcy",
        "run": {
            "ensemble_size": 300,
            "n_iterations": 20,
            "rng_seed": 0,
            "init_mean": "smoothed_truth",
            "init_variance": 1e-3,
            "sec": {"enabled": True, "a": 0.2},
        },
        "reg": {"p": 1.0, "lambda": 1.0},
        "model": {"kind": "darcy", "params": {"mesh": mesh, "n_observations": 20}},
        "measurement": {"variance": 1e-6},
        "truth": {"kind": "square_inclusion", "params": {"lower": 0.25, "upper": 0.75, "value": 1.0}},
    }


PRESETS = {
    "toy": _toy,
    "compressive_sensing": _compressive_sensing,
    "deblurring": _deblurring,
    "lorenz96": _lorenz96,
    "darcy": _darcy,
    "darcy_fine": lambda: _darcy(mesh=50),
}


def preset_names() -> list[str]:
    return list(PRESETS)


def preset_document(name: str) -> dict[str, Any]:
    """A fresh copy of the preset's configuration document."""
    try:
        return copy.deepcopy(PRESETS[name]())
    except KeyError:
        raise ConfigError(key="preset", value=name, reason=f"unknown preset (known: {', '.join(PRESETS)})") from None


def load_preset(name: str) -> ExperimentConfig:
    return parse_config(preset_document(name))
