from __future__ import annotations

import csv
import json
import math

import numpy as np
import pytest

from seceki.core.exceptions import ConfigError
from seceki.core.exceptions import ValidationError
from seceki.eki import init_ensemble
from seceki.harness.compare import compare_variants
from seceki.harness.compare import variants
from seceki.harness.diagnostics import check_subspace_violation
from seceki.harness.diagnostics import correlation_profile
from seceki.harness.diagnostics import correlation_sampling_stddev
from seceki.harness.experiment import run_experiment
from seceki.harness.factory import build_measurement
from seceki.harness.factory import build_model
from seceki.harness.factory import build_truth
from seceki.harness.metrics import emit_metrics
from seceki.harness.metrics import read_metrics
from seceki.harness.plotting import render_plot_script
from seceki.harness.presets import load_preset
from seceki.models.image import load_pgm


@pytest.fixture
def small_toy():
    return load_preset("toy").with_overrides({"run.ensemble_size": 10, "run.n_iterations": 3})


@pytest.fixture
def small_deblurring():
    return load_preset("deblurring").with_overrides(
        {"model.params": {"height": 8, "width": 8, "sigma": 0.7}, "run.ensemble_size": 10, "run.n_iterations": 2}
    )


class TestRunExperiment:
    def test_artifacts(self, output_dir, small_toy):
        result = run_experiment(small_toy)
        assert result.output_dir == output_dir / "runs" / "toy"
        for name in ("metrics.csv", "estimate.csv", "trajectory.csv", "summary.json", "plot_metrics.py"):
            assert (result.output_dir / name).is_file()

        lines = (result.output_dir / "metrics.csv").read_text().splitlines()
        assert lines[0] == "iteration,l1_error,data_misfit,wall_time_seconds"
        assert len(lines) == 4
        assert len((result.output_dir / "estimate.csv").read_text().splitlines()) == 100
        trajectory = (result.output_dir / "trajectory.csv").read_text().splitlines()
        assert trajectory[0] == "iteration,u1,u2,u3,u4"
        assert len(trajectory) == 5

        summary = json.loads((result.output_dir / "summary.json").read_text())
        assert summary["experiment"] == "toy"
        assert summary["n_iterations"] == 3
        assert summary["final_l1_error"] == pytest.approx(result.record.final.l1_error)

    def test_metrics_round_trip(self, output_dir, small_toy):
        result = run_experiment(small_toy)
        rows = read_metrics(result.output_dir / "metrics.csv")
        assert [row.iteration for row in rows] == [1, 2, 3]
        assert [row.l1_error for row in rows] == list(result.record.l1_errors)
        again = emit_metrics(result.record, output_dir / "again.csv")
        assert again.read_bytes() == (result.output_dir / "metrics.csv").read_bytes()

    def test_same_seed_same_results(self, output_dir, small_toy):
        first = run_experiment(small_toy, out=output_dir / "first")
        second = run_experiment(small_toy, out=output_dir / "second")
        for name in ("estimate.csv", "trajectory.csv"):
            assert (first.output_dir / name).read_bytes() == (second.output_dir / name).read_bytes()
        strip = [(r.iteration, r.l1_error, r.data_misfit) for r in read_metrics(first.output_dir / "metrics.csv")]
        assert strip == [(r.iteration, r.l1_error, r.data_misfit) for r in read_metrics(second.output_dir / "metrics.csv")]

    def test_without_writing(self, output_dir, small_toy):
        result = run_experiment(small_toy, write=False)
        assert result.output_dir is None
        assert result.artifacts == {}
        assert not (output_dir / "runs").exists()

    def test_exact_toy_data(self, small_toy):
        model = build_model(small_toy)
        measurement = build_measurement(small_toy, model, build_truth(small_toy))
        assert np.array_equal(measurement.y, np.ones(100))

    def test_noisy_data_uses_run_seed(self, small_toy):
        noisy = small_toy.with_overrides({"measurement.noise": True})
        model = build_model(noisy)
        first = build_measurement(noisy, model, build_truth(noisy)).y
        assert not np.array_equal(first, np.ones(100))
        assert np.array_equal(first, build_measurement(noisy, model, build_truth(noisy)).y)

    def test_deblurring_images(self, output_dir, small_deblurring):
        result = run_experiment(small_deblurring)
        for name in ("truth.pgm", "measurement.pgm", "estimate.pgm"):
            assert load_pgm(result.output_dir / name).shape == (8, 8)
        assert math.isfinite(result.summary["psnr_measurement"])
        assert math.isfinite(result.summary["psnr_estimate"])

    def test_compressive_sensing(self, output_dir):
        cfg = load_preset("compressive_sensing").with_overrides(
            {"model.params": {"m": 10, "n": 20}, "run.ensemble_size": 15, "run.n_iterations": 3}
        )
        result = run_experiment(cfg, write=False)
        assert np.count_nonzero(result.truth) == 4
        assert set(np.round(result.truth[result.truth != 0], 6)) == {2.0, -1.5, 1.0, 0.1}
        assert np.all(np.isfinite(result.record.final.estimate))

    def test_lorenz96(self):
        cfg = load_preset("lorenz96").with_overrides(
            {
                "model.params": {"n_state": 8, "dt": 0.05, "t_final": 0.25, "wavenumbers": [1, 2, 3]},
                "truth.params": {"spin_up": 1.0},
                "run.ensemble_size": 10,
                "run.n_iterations": 2,
            }
        )
        result = run_experiment(cfg, write=False)
        assert result.measurement.dim == 6
        assert np.all(np.isfinite(result.record.final.estimate))

    def test_darcy(self):
        cfg = load_preset("darcy").with_overrides(
            {"model.params": {"mesh": 6, "n_observations": 4}, "run.ensemble_size": 10, "run.n_iterations": 2}
        )
        result = run_experiment(cfg, write=False)
        assert result.truth.size == 36
        assert result.record.final.data_misfit < result.record.initial.data_misfit

    def test_truth_must_fit_model(self, small_toy):
        cfg = small_toy.with_overrides({"truth": {"kind": "inline", "params": {"values": [1.0, 2.0]}}})
        with pytest.raises(ConfigError) as info:
            run_experiment(cfg, write=False)
        assert info.value.extra["experiment"] == "toy"


class TestCompare:
    def test_variants(self, small_toy):
        names = [v.name for v in variants(small_toy, [5, 8])]
        assert names == ["K5_sec", "K5_nosec", "K8_sec", "K8_nosec"]

    def test_needs_positive_exponent(self, small_toy):
        with pytest.raises(ConfigError):
            variants(small_toy.with_overrides({"run.sec": {"enabled": False, "a": 0.0}}))

    def test_summary(self, output_dir, small_toy):
        results = compare_variants(small_toy, sizes=[5, 8], out=output_dir / "cmp")
        assert len(results) == 4
        with (output_dir / "cmp" / "summary.csv").open(newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert [row["variant"] for row in rows] == ["K5_sec", "K5_nosec", "K8_sec", "K8_nosec"]
        assert [row["sec"] for row in rows] == ["true", "false", "true", "false"]
        assert (output_dir / "cmp" / "K8_nosec" / "metrics.csv").is_file()


class TestDiagnostics:
    def test_correlation_stddev_for_independent_samples(self):
        assert correlation_sampling_stddev(0.0, 10, 100_000) == pytest.approx(1 / 3, abs=0.01)

    @pytest.mark.slow
    def test_correlation_stddev_shrinks_with_correlation(self):
        spreads = [correlation_sampling_stddev(r, 10, 100_000) for r in (0.0, 0.5, 0.9)]
        assert spreads[0] > spreads[1] > spreads[2]
        assert spreads[1] == pytest.approx(0.75 / 3, abs=0.03)

    def test_correlation_stddev_validation(self):
        with pytest.raises(ValidationError):
            correlation_sampling_stddev(1.0, 10, 100)
        with pytest.raises(ValidationError):
            correlation_sampling_stddev(0.0, 2, 100)

    def test_subspace_on_r4_example(self):
        report = check_subspace_violation(None, 1.0)
        assert report.any_violation
        assert report.increment_residuals[0] > 0.01
        assert not check_subspace_violation(None, 0.0).any_violation

    def test_subspace_on_configured_problem(self, small_toy):
        report = check_subspace_violation(small_toy, 1.0)
        assert report.member_residuals.shape == (10,)
        assert report.any_violation
        assert not check_subspace_violation(small_toy, 0.0).any_violation

    def test_subspace_needs_small_ensemble(self, small_toy):
        cfg = small_toy.with_overrides({"model.params": {"n": 5}, "run.init_mean": 0.0})
        with pytest.raises(ConfigError):
            check_subspace_violation(cfg, 1.0)

    def test_correlation_profile(self, small_deblurring):
        profile = correlation_profile(small_deblurring.with_overrides({"run.ensemble_size": 200}), (3, 4), a=1.0)
        assert profile.raw.shape == (8,)
        assert np.all(np.abs(profile.raw) <= 1.0)
        np.testing.assert_allclose(profile.corrected, np.sign(profile.raw) * profile.raw**2, atol=1e-15)
        assert np.abs(profile.raw[3]) == pytest.approx(np.abs(profile.raw).max())

    def test_correlation_profile_matches_sample_correlation(self, small_deblurring):
        cfg = small_deblurring.with_overrides({"run.ensemble_size": 40})
        profile = correlation_profile(cfg, (2, 5), a=1.0)
        members = init_ensemble(cfg.run).members
        model = build_model(cfg)
        measured = np.array([model(u)[2 * 8 + 5] for u in members])
        expected = [np.corrcoef(members[:, i * 8 + 5], measured)[0, 1] for i in range(8)]
        np.testing.assert_allclose(profile.raw, expected, atol=1e-12)

    def test_correlation_profile_validation(self, small_toy, small_deblurring):
        with pytest.raises(ConfigError):
            correlation_profile(small_toy, (0, 0))
        with pytest.raises(ConfigError):
            correlation_profile(small_deblurring, (8, 0))


def test_plot_script_is_valid_python():
    script = render_plot_script("toy")
    assert "matplotlib" in script
    compile(script, "plot_metrics.py", "exec")
