from __future__ import annotations

import json

import numpy as np
import pytest

from seceki.core.exceptions import ConfigError
from seceki.core.exceptions import StorageError
from seceki.harness.config import load_config
from seceki.harness.config import model_input_dim
from seceki.harness.config import parse_config
from seceki.harness.factory import build_model
from seceki.harness.presets import load_preset
from seceki.harness.presets import preset_document
from seceki.harness.presets import preset_names


def config_error_key(document) -> str:
    with pytest.raises(ConfigError) as info:
        parse_config(document)
    return info.value.key


@pytest.mark.parametrize("name", preset_names())
def test_presets_parse(name):
    cfg = load_preset(name)
    assert cfg.experiment == name.removesuffix("_fine")
    assert cfg.run.dim == model_input_dim(cfg.model)


def test_toy_preset():
    cfg = load_preset("toy")
    assert cfg.run.init_mean[0] == 0.0
    assert np.all(cfg.run.init_mean[1:] == 1.0)
    assert not cfg.noisy_data
    assert cfg.reg is None
    assert cfg.run.sec.active


def test_darcy_preset_starts_from_smoothed_truth():
    cfg = load_preset("darcy")
    assert cfg.run.dim == 625
    assert cfg.reg.p == 1.0
    assert 0.0 < cfg.run.init_mean.max() < 1.0


def test_unknown_preset():
    with pytest.raises(ConfigError) as info:
        preset_document("nope")
    assert info.value.key == "preset"


def test_preset_documents_are_copies():
    document = preset_document("toy")
    document["run"]["ensemble_size"] = 3
    assert preset_document("toy")["run"]["ensemble_size"] == 50


@pytest.mark.parametrize(
    ("section", "expected"),
    [
        (None, "bogus"),
        ("run", "run.bogus"),
        ("measurement", "measurement.bogus"),
        ("run.sec", "run.sec.bogus"),
    ],
)
def test_unknown_keys_are_named(section, expected):
    document = preset_document("toy")
    node = document
    if section:
        for part in section.split("."):
            node = node[part]
    node["bogus"] = 1
    assert config_error_key(document) == expected


def test_unknown_model_param():
    document = preset_document("toy")
    document["model"]["params"]["depth"] = 3
    assert config_error_key(document) == "model.params.depth"


def test_unknown_model_kind():
    document = preset_document("toy")
    document["model"]["kind"] = "heat"
    assert config_error_key(document) == "model.kind"


def test_regularized_experiment_needs_reg():
    document = preset_document("compressive_sensing")
    del document["reg"]
    assert config_error_key(document) == "reg"


@pytest.mark.parametrize(
    ("key", "value", "expected"),
    [
        ("ensemble_size", 1, "run.ensemble_size"),
        ("ensemble_size", 2.5, "run.ensemble_size"),
        ("n_iterations", 0, "run.n_iterations"),
        ("init_variance", -1.0, "run.init_variance"),
        ("rng_seed", -3, "run.rng_seed"),
        ("init_mean", [0.0, 1.0], "run.init_mean"),
        ("init_mean", "smoothed_truth", "run.init_mean"),
    ],
)
def test_invalid_run_values(key, value, expected):
    document = preset_document("toy")
    document["run"][key] = value
    assert config_error_key(document) == expected


def test_invalid_sec():
    document = preset_document("toy")
    document["run"]["sec"] = {"enabled": "yes", "a": 1.0}
    assert config_error_key(document) == "run.sec.enabled"
    document["run"]["sec"] = {"enabled": True, "a": -1.0}
    assert config_error_key(document) == "run.sec.a"


def test_invalid_reg():
    document = preset_document("compressive_sensing")
    document["reg"]["p"] = 3.0
    assert config_error_key(document) == "reg.p"
    document["reg"] = {"p": 1.0, "lambda": 0}
    assert config_error_key(document) == "reg.lambda"


def test_measurement_noise_flag():
    document = preset_document("compressive_sensing")
    assert parse_config(document).noisy_data
    document["measurement"]["noise"] = "off"
    assert config_error_key(document) == "measurement.noise"


def test_measurement_variance_must_be_positive():
    document = preset_document("toy")
    document["measurement"]["variance"] = 0.0
    assert config_error_key(document) == "measurement.variance"


def test_with_overrides():
    cfg = load_preset("compressive_sensing")
    changed = cfg.with_overrides({"run.ensemble_size": 10, "run.sec": {"enabled": False, "a": 0.0}, "output_dir": "elsewhere"})
    assert changed.run.ensemble_size == 10
    assert not changed.run.sec.active
    assert changed.output_dir == "elsewhere"
    assert cfg.run.ensemble_size == 50
    assert changed.with_overrides({"output_dir": None}).output_dir is None


def test_with_overrides_validates():
    with pytest.raises(ConfigError):
        load_preset("toy").with_overrides({"run.n_iterations": 0})


def test_load_config(tmp_path):
    path = tmp_path / "toy.json"
    path.write_text(json.dumps(preset_document("toy")))
    cfg = load_config(path)
    assert cfg.experiment == "toy"
    assert cfg.raw == preset_document("toy")


def test_load_config_missing_file(tmp_path):
    with pytest.raises(StorageError):
        load_config(tmp_path / "missing.json")


def test_load_config_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"experiment": "toy",')
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert info.value.key == "<root>"
    assert info.value.exit_code == 2


PRESET_PINS = {
    "toy": {"n": 100, "m": 100, "obs_variance": 0.1, "init_variance": 0.1, "a": 1.0, "reg": None},
    "compressive_sensing": {"n": 100, "m": 30, "obs_variance": 1e-2, "a": 1.0, "reg": (1.0, 50.0)},
    "deblurring": {"n": 1024, "m": 1024, "obs_variance": 1e-4, "init_variance": 2e-4, "a": 3.0, "reg": None},
    "lorenz96": {"n": 40, "m": 36, "obs_variance": 1e-2, "a": 1.0, "reg": (2.0, 0.1)},
    "darcy": {"n": 625, "m": 400, "obs_variance": 1e-6, "a": 0.2, "reg": (1.0, 1.0)},
}


@pytest.mark.parametrize(("name", "pins"), PRESET_PINS.items())
def test_preset_values(name, pins):
    cfg = load_preset(name)
    assert cfg.run.dim == pins["n"]
    assert build_model(cfg).output_dim == pins["m"]
    assert cfg.obs_variance == pins["obs_variance"]
    assert cfg.run.sec.enabled
    assert cfg.run.sec.exponent_a == pins["a"]
    if "init_variance" in pins:
        assert np.all(cfg.run.init_variance == pins["init_variance"])
    if pins["reg"] is None:
        assert cfg.reg is None
    else:
        assert (cfg.reg.p, cfg.reg.lam) == pins["reg"]


def test_deblurring_preset_blur_width():
    assert load_preset("deblurring").model.params["sigma"] == 0.7
