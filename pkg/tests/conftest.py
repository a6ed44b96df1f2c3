from __future__ import annotations

import numpy as np
import pytest

from seceki.conf import settings
from seceki.eki.problem import Ensemble
from seceki.eki.problem import InverseProblem
from seceki.eki.problem import MeasurementModel
from seceki.harness.diagnostics import r4_example
from seceki.models.linear import LinearModel
from seceki.models.linear import LinearModelSpec


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running experiment checks")


@pytest.fixture
def r4():
    """The three-member ensemble in R^4 with G(u) = u_1, y = 2 and noise variance 7/9."""
    return r4_example()


@pytest.fixture
def r4_ensemble(r4) -> Ensemble:
    return r4[1]


@pytest.fixture
def r4_problem(r4) -> InverseProblem:
    return r4[0]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def small_linear_problem():
    """M = 4 observations of N = 6 unknowns, noise variance 0.01."""
    spec = LinearModelSpec.generated(4, 6, seed=3)
    model = LinearModel(spec)
    truth = np.array([1.0, -0.5, 0.25, 0.0, 0.75, -1.0])
    measurement = MeasurementModel.diagonal(model(truth), 0.01)
    return InverseProblem(model, measurement), truth


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Run artifacts land in a temporary directory; the working directory moves there too."""
    monkeypatch.chdir(tmp_path)
    settings.configure(OUTPUT_DIR=str(tmp_path / "runs"))
    yield tmp_path
    settings.reset()
