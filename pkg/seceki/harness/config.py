"""
Experiment configuration.

An experiment is described by a JSON document:

    {
      "experiment": "toy",
      "run": {
        "ensemble_size": 50, "n_iterations": 20, "rng_seed": 0,
        "init_mean": 1.0, "init_variance": 0.1,
        "sec": {"enabled": true, "a": 1.0}
      },
      "reg": {"p": 1.0, "lambda": 50.0},
      "model": {"kind": "identity", "params": {"n": 100}},
      "measurement": {"variance": 0.1, "noise": false},
      "truth": {"kind": "constant", "params": {"value": 1.0}},
      "output_dir": "runs/toy"
    }

``init_mean`` is a number (broadcast), a list of N numbers, or the string
``"smoothed_truth"`` (Gaussian-filtered square-inclusion truth, Darcy only).
``reg`` is required for compressive_sensing, lorenz96 and darcy.
``measurement.noise`` (default true) adds a draw of the observation noise to
G(u_true); with false the data are exact and the variance only weights the
misfit and the perturbations. Unknown keys anywhere are rejected with a
ConfigError naming the dotted key.
"""

from __future__ import annotations

import copy
import json
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from seceki.core.exceptions import ConfigError
from seceki.core.exceptions import StorageError
from seceki.core.exceptions import ValidationError
from seceki.eki.problem import RunConfig
from seceki.lp.transform import RegularizationConfig
from seceki.models.darcy import smoothed_initial_mean
from seceki.models.darcy import square_inclusion
from seceki.sec.correction import SecConfig

__all__ = (
    "EXPERIMENTS",
    "REGULARIZED_EXPERIMENTS",
    "MODEL_PARAMS",
    "TRUTH_PARAMS",
    "ModelConfig",
    "TruthConfig",
    "ExperimentConfig",
    "parse_config",
    "load_config",
    "model_input_dim",
)

EXPERIMENTS = ("toy", "compressive_sensing", "deblurring", "lorenz96", "darcy", "custom")
REGULARIZED_EXPERIMENTS = ("compressive_sensing", "lorenz96", "darcy")

_TOP_KEYS = ("experiment", "run", "reg", "model", "measurement", "truth", "output_dir")
_RUN_KEYS = ("ensemble_size", "n_iterations", "rng_seed", "init_mean", "init_variance", "sec")

MODEL_PARAMS: dict[str, tuple[str, ...]] = {
    "identity": ("n",),
    "linear": ("m", "n", "seed", "matrix"),
    "gaussian_blur": ("height", "width", "sigma"),
    "lorenz96": ("n_state", "forcing", "dt", "t_final", "wavenumbers"),
    "darcy": ("mesh", "n_observations"),
}

TRUTH_PARAMS: dict[str, tuple[str, ...]] = {
    "constant": ("value",),
    "inline": ("values",),
    "file": ("path",),
    "sparse": ("magnitudes", "seed"),
    "image": ("path",),
    "lorenz96_attractor": ("spin_up", "seed"),
    "square_inclusion": ("lower", "upper", "value"),
}


@dataclass(frozen=True)
class ModelConfig:
    kind: str
    params: Mapping[str, Any]


@dataclass(frozen=True)
class TruthConfig:
    kind: str
    params: Mapping[str, Any]


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """
    Validated experiment.

    ``raw`` keeps the parsed JSON document; ``with_overrides`` edits it by
    dotted key and validates again.
    """

    experiment: str
    run: RunConfig
    model: ModelConfig
    truth: TruthConfig
    obs_variance: float
    reg: RegularizationConfig | None
    output_dir: str | None
    raw: Mapping[str, Any]
    noisy_data: bool = True

    @property
    def uses_regularization(self) -> bool:
        return self.reg is not None

    def with_overrides(self, overrides: Mapping[str, Any]) -> ExperimentConfig:
        data = copy.deepcopy(dict(self.raw))
        for dotted, value in overrides.items():
            node = data
            *parents, leaf = dotted.split(".")
            for part in parents:
                node = node.setdefault(part, {})
                if not isinstance(node, dict):
                    raise ConfigError(key=dotted, reason=f"'{part}' is not a section")
            if value is None:
                node.pop(leaf, None)
            else:
                node[leaf] = value
        return parse_config(data)


def _section(data: Any, key: str, allowed: tuple[str, ...]) -> dict:
    if not isinstance(data, Mapping):
        raise ConfigError(key=key or "<root>", value=data, reason="must be an object")
    for name in data:
        if name not in allowed:
            dotted = f"{key}.{name}" if key else name
            raise ConfigError(key=dotted, reason=f"unknown key (allowed: {', '.join(allowed)})")
    return dict(data)


def _required(section: Mapping, name: str, key: str) -> Any:
    if name not in section:
        raise ConfigError(key=key, reason="is required")
    return section[name]


def _int(value: Any, key: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(key=key, value=value, reason="must be an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(key=key, value=value, reason=f"must be >= {minimum}")
    return value


def _float(value: Any, key: str, positive: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key=key, value=value, reason="must be a number")
    value = float(value)
    if not np.isfinite(value) or (positive and value <= 0):
        raise ConfigError(key=key, value=value, reason="must be a finite number" + (" > 0" if positive else ""))
    return value


def _kind_section(data: Any, key: str, table: Mapping[str, tuple[str, ...]]) -> tuple[str, dict]:
    section = _section(data, key, ("kind", "params"))
    kind = _required(section, "kind", f"{key}.kind")
    if kind not in table:
        raise ConfigError(key=f"{key}.kind", value=kind, reason=f"must be one of {', '.join(table)}")
    params = _section(section.get("params", {}), f"{key}.params", table[kind])
    return kind, params


def _param_int(params: Mapping, name: str, key: str, default: int | None = None, minimum: int = 1) -> int:
    if name not in params:
        if default is None:
            raise ConfigError(key=f"{key}.{name}", reason="is required")
        return default
    return _int(params[name], f"{key}.{name}", minimum)


def model_input_dim(model: ModelConfig) -> int:
    """Dimension N of the unknown for a model section, without building the model."""
    params = model.params
    key = "model.params"
    if model.kind == "identity":
        return _param_int(params, "n", key)
    if model.kind == "linear":
        if "matrix" in params:
            matrix = np.asarray(params["matrix"], dtype=float)
            if matrix.ndim != 2:
                raise ConfigError(key=f"{key}.matrix", reason="must be a list of equal-length rows")
            return matrix.shape[1]
        return _param_int(params, "n", key)
    if model.kind == "gaussian_blur":
        return _param_int(params, "height", key, 32) * _param_int(params, "width", key, 32)
    if model.kind == "lorenz96":
        return _param_int(params, "n_state", key, 40, minimum=4)
    return _param_int(params, "mesh", key, 50, minimum=2) ** 2


def _parse_sec(data: Any) -> SecConfig:
    section = _section(data, "run.sec", ("enabled", "a"))
    enabled = section.get("enabled", False)
    if not isinstance(enabled, bool):
        raise ConfigError(key="run.sec.enabled", value=enabled, reason="must be true or false")
    a = _float(section.get("a", 0.0), "run.sec.a")
    try:
        return SecConfig(enabled=enabled, exponent_a=a)
    except ValidationError as err:
        raise ConfigError(key="run.sec.a", value=a, reason=err.reason) from err


def _parse_init_mean(value: Any, n: int, truth: TruthConfig) -> np.ndarray:
    key = "run.init_mean"
    if value == "smoothed_truth":
        if truth.kind != "square_inclusion":
            raise ConfigError(key=key, value=value, reason="requires truth.kind 'square_inclusion'")
        mesh = int(round(np.sqrt(n)))
        return smoothed_initial_mean(square_inclusion(mesh, **truth.params), mesh)
    if isinstance(value, list):
        mean = np.asarray([_float(v, f"{key}[{i}]") for i, v in enumerate(value)])
        if mean.size != n:
            raise ConfigError(key=key, value=mean.size, reason=f"has {mean.size} entries, the model expects {n}")
        return mean
    return np.full(n, _float(value, key))


def parse_config(data: Mapping[str, Any]) -> ExperimentConfig:
    """
    Validate a configuration document.

    Raises:
        ConfigError: On unknown keys, missing keys or out-of-range values.
    """
    top = _section(data, "", _TOP_KEYS)
    experiment = _required(top, "experiment", "experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(key="experiment", value=experiment, reason=f"must be one of {', '.join(EXPERIMENTS)}")

    model = ModelConfig(*_kind_section(_required(top, "model", "model"), "model", MODEL_PARAMS))
    truth = TruthConfig(*_kind_section(_required(top, "truth", "truth"), "truth", TRUTH_PARAMS))
    n = model_input_dim(model)

    measurement = _section(_required(top, "measurement", "measurement"), "measurement", ("variance", "noise"))
    obs_variance = _float(_required(measurement, "variance", "measurement.variance"), "measurement.variance", positive=True)
    noisy_data = measurement.get("noise", True)
    if not isinstance(noisy_data, bool):
        raise ConfigError(key="measurement.noise", value=noisy_data, reason="must be true or false")

    run_section = _section(_required(top, "run", "run"), "run", _RUN_KEYS)
    run = RunConfig(
        ensemble_size=_int(_required(run_section, "ensemble_size", "run.ensemble_size"), "run.ensemble_size"),
        n_iterations=_int(_required(run_section, "n_iterations", "run.n_iterations"), "run.n_iterations"),
        init_mean=_parse_init_mean(run_section.get("init_mean", 0.0), n, truth),
        init_variance=_float(_required(run_section, "init_variance", "run.init_variance"), "run.init_variance"),
        rng_seed=_int(run_section.get("rng_seed", 0), "run.rng_seed", minimum=0),
        sec=_parse_sec(run_section.get("sec", {})),
    )

    reg = None
    if top.get("reg") is not None:
        reg_section = _section(top["reg"], "reg", ("p", "lambda"))
        reg = RegularizationConfig(
            p=_float(_required(reg_section, "p", "reg.p"), "reg.p"),
            lam=_float(_required(reg_section, "lambda", "reg.lambda"), "reg.lambda"),
        )
    elif experiment in REGULARIZED_EXPERIMENTS:
        raise ConfigError(key="reg", reason=f"regularization is required for the {experiment} experiment")

    output_dir = top.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        raise ConfigError(key="output_dir", value=output_dir, reason="must be a string")

    return ExperimentConfig(
        experiment=experiment,
        run=run,
        model=model,
        truth=truth,
        obs_variance=obs_variance,
        reg=reg,
        output_dir=output_dir,
        raw=copy.deepcopy(dict(data)),
        noisy_data=noisy_data,
    )


def load_config(path) -> ExperimentConfig:
    """
    Read and validate a JSON configuration file.

    Raises:
        StorageError: If the file cannot be read.
        ConfigError: If it is not valid JSON or violates the schema.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise StorageError(f"Cannot read configuration: {e}", path=path) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(key="<root>", reason=f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    return parse_config(data)
