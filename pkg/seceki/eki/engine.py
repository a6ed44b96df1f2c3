"""
Discrete-time ensemble Kalman inversion.

One iteration is a prediction step followed by an analysis step:

1. Prediction: g_k = G(u_k) for every member, then the sample covariances
   C^{ug} and C^{gg} (1/K normalization), optionally sampling-error corrected.
2. Analysis: u_k <- u_k + C^{ug} (C^{gg} + Gamma)^{-1} (y + zeta_k - g_k)
   with fresh perturbations zeta_k ~ Normal(0, Gamma) per iteration and member.

The estimate reported for an iteration is the mean of the updated members.

Usage:
    record = run(InverseProblem(model, measurement), cfg, truth=u_true)
    record.final.estimate
"""

from __future__ import annotations

import time
from collections.abc import Callable

import numpy as np
from joblib import Parallel
from joblib import delayed

from seceki.conf import settings
from seceki.core.exceptions import ForwardModelError
from seceki.core.exceptions import NumericalError
from seceki.core.exceptions import SecekiError
from seceki.core.exceptions import StructuralError
from seceki.eki.problem import Ensemble
from seceki.eki.problem import InverseProblem
from seceki.eki.problem import IterationRecord
from seceki.eki.problem import MeasurementModel
from seceki.eki.problem import RunConfig
from seceki.eki.problem import RunRecord
from seceki.models.base import ForwardModel
from seceki.sec.correction import SecConfig
from seceki.sec.correction import corrected_covariances
from seceki.stats.linalg import project_psd
from seceki.stats.linalg import spd_solve
from seceki.stats.sample import SampleSet
from seceki.stats.sample import auto_covariance
from seceki.stats.sample import cross_covariance
from seceki.stats.sample import sample_std
from seceki.utils.log import get_seceki_logger
from seceki.utils.random import Purpose
from seceki.utils.random import RandomStreams

__all__ = ("init_ensemble", "predict", "kalman_update", "run", "EnsembleKalmanInversion")

logger = get_seceki_logger(__name__)


def init_ensemble(cfg: RunConfig) -> Ensemble:
    """
    Draw K members with component j ~ Normal(init_mean_j, init_variance_j).

    Member k comes from its own stream of the run seed, so the ensemble does
    not depend on how many threads later evaluate it.
    """
    streams = RandomStreams(cfg.rng_seed)
    sd = np.sqrt(cfg.init_variance)
    members = np.empty((cfg.ensemble_size, cfg.dim))
    for k in range(cfg.ensemble_size):
        members[k] = cfg.init_mean + sd * streams.stream(Purpose.INIT, 0, k).standard_normal(cfg.dim)
    return Ensemble(members=members, iteration_index=0)


def _evaluate_member(model: ForwardModel, u: np.ndarray, member: int) -> np.ndarray:
    try:
        out = model(u)
    except SecekiError as err:
        if isinstance(err, StructuralError):
            raise
        raise ForwardModelError(member=member, reason=str(err)) from err
    except Exception as err:
        raise ForwardModelError(member=member, reason=repr(err)) from err
    if not np.all(np.isfinite(out)):
        raise ForwardModelError(member=member, reason="non-finite prediction")
    return out


def predict(e: Ensemble, g: ForwardModel, threads: int | None = None) -> SampleSet:
    """
    Apply the forward model to every member.

    With ``threads > 1`` members are evaluated concurrently; results are
    assembled in member order either way.

    Raises:
        StructuralError: If the ensemble dimension differs from the model input.
        ForwardModelError: If the model fails on a member.
    """
    if e.dim != g.input_dim:
        raise StructuralError(f"Ensemble dimension {e.dim} does not match model input {g.input_dim}")
    threads = settings.THREADS if threads is None else threads
    if threads > 1:
        outputs = Parallel(n_jobs=threads, prefer="threads")(
            delayed(_evaluate_member)(g, u, k) for k, u in enumerate(e.members)
        )
    else:
        outputs = [_evaluate_member(g, u, k) for k, u in enumerate(e.members)]
    return SampleSet(np.vstack(outputs))


def _solve_innovations(c_gg: np.ndarray, gamma: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Solve (C^gg + Gamma) X = rhs.

    A corrected C^gg need not be positive semidefinite. When the factorization
    fails, C^gg is replaced by its projection onto the positive semidefinite
    cone; a diagonal jitter of JITTER_SCALE times the mean diagonal is the
    last resort.
    """
    try:
        return spd_solve(c_gg + gamma, rhs)
    except NumericalError as err:
        logger.warning("C^gg + Gamma not positive definite (pivot %s); projecting C^gg onto the PSD cone", err.pivot)
    system = project_psd(c_gg) + gamma
    try:
        return spd_solve(system, rhs)
    except NumericalError as err:
        jitter = settings.JITTER_SCALE * np.trace(system) / system.shape[0]
        logger.warning("projected system not positive definite (pivot %s); retrying with jitter %.3e", err.pivot, jitter)
    try:
        return spd_solve(system + jitter * np.eye(system.shape[0]), rhs)
    except NumericalError as retry_err:
        raise NumericalError(
            "Kalman gain solve failed after PSD projection and jitter", pivot=retry_err.pivot, jitter=jitter
        ) from retry_err


def perturbations(m: MeasurementModel, size: int, iteration: int, streams: RandomStreams | None) -> np.ndarray:
    """zeta_k ~ Normal(0, Gamma) for k < size, one stream per (iteration, member); zeros without streams."""
    if streams is None:
        return np.zeros((size, m.dim))
    return np.vstack([m.sample_noise(streams.stream(Purpose.PERTURB, iteration, k)) for k in range(size)])


def kalman_update(
    e: Ensemble,
    preds: SampleSet,
    m: MeasurementModel,
    sec: SecConfig,
    rng: RandomStreams | None,
) -> Ensemble:
    """
    Perturbed-observation Kalman update of every member.

    ``rng`` supplies the perturbation streams; ``None`` means zeta = 0.

    Raises:
        StructuralError: If predictions and ensemble do not fit together.
        NumericalError: If the gain system cannot be factored after projection and jitter.
    """
    if preds.size != e.size:
        raise StructuralError(f"{preds.size} predictions for {e.size} members")
    if preds.dim != m.dim:
        raise StructuralError(f"Prediction dimension {preds.dim} does not match measurement dimension {m.dim}")

    u = e.members
    g = preds.members
    c_ug = cross_covariance(u, g)
    c_gg = auto_covariance(g)
    if sec.active:
        c_ug, c_gg = corrected_covariances(c_ug, c_gg, sample_std(u), np.sqrt(np.diag(c_gg)), sec)

    innovations = m.y + perturbations(m, e.size, e.iteration_index, rng) - g
    weights = _solve_innovations(c_gg, m.gamma, innovations.T)
    members = u + (c_ug @ weights).T
    return Ensemble(members=members, iteration_index=e.iteration_index + 1)


def _l1_error(estimate: np.ndarray, truth: np.ndarray | None) -> float | None:
    return None if truth is None else float(np.abs(estimate - truth).sum())


class EnsembleKalmanInversion:
    """
    Iteration driver shared by the plain and the regularized solvers.

    Args:
        problem: The problem the ensemble is updated against.
        cfg: Run settings.
        to_estimate: Maps the ensemble mean to the reported estimate
            (identity for plain EKI).
        metrics_problem: Problem used for the data misfit of the estimate;
            defaults to ``problem``.
        threads: Forward sweep worker count (defaults to settings.THREADS).
    """

    def __init__(
        self,
        problem: InverseProblem,
        cfg: RunConfig,
        *,
        to_estimate: Callable[[np.ndarray], np.ndarray] | None = None,
        metrics_problem: InverseProblem | None = None,
        threads: int | None = None,
    ):
        if cfg.dim != problem.input_dim:
            raise StructuralError(f"init_mean has dimension {cfg.dim}, the model expects {problem.input_dim}")
        self.problem = problem
        self.cfg = cfg
        self.to_estimate = to_estimate or (lambda mean: mean)
        self.metrics_problem = metrics_problem or problem
        self.threads = threads
        self.streams = RandomStreams(cfg.rng_seed)

    def record(self, ensemble: Ensemble, truth, started: float) -> IterationRecord:
        estimate = np.asarray(self.to_estimate(ensemble.mean()), dtype=float)
        return IterationRecord(
            iteration=ensemble.iteration_index,
            estimate=estimate,
            l1_error=_l1_error(estimate, truth),
            data_misfit=self.metrics_problem.misfit(estimate),
            wall_time_seconds=time.perf_counter() - started,
        )

    def step(self, ensemble: Ensemble) -> Ensemble:
        preds = predict(ensemble, self.problem.model, self.threads)
        return kalman_update(ensemble, preds, self.problem.measurement, self.cfg.sec, self.streams)

    def run(self, ensemble: Ensemble, truth=None) -> RunRecord:
        truth = None if truth is None else np.asarray(truth, dtype=float)
        started = time.perf_counter()
        record = RunRecord(initial=self.record(ensemble, truth, started))
        logger.info(
            "EKI run: K=%d N=%d M=%d iterations=%d sec=%s a=%g",
            ensemble.size,
            ensemble.dim,
            self.problem.measurement.dim,
            self.cfg.n_iterations,
            self.cfg.sec.enabled,
            self.cfg.sec.exponent_a,
        )
        for _ in range(self.cfg.n_iterations):
            ensemble = self.step(ensemble)
            entry = self.record(ensemble, truth, started)
            record.iterations.append(entry)
            logger.debug(
                "iteration %d: misfit=%.6e l1=%s",
                entry.iteration,
                entry.data_misfit,
                "n/a" if entry.l1_error is None else f"{entry.l1_error:.6e}",
            )
        record.final_ensemble = ensemble
        logger.info("EKI run finished: misfit %.6e -> %.6e", record.initial.data_misfit, record.final.data_misfit)
        return record


def run(problem: InverseProblem, cfg: RunConfig, truth=None, threads: int | None = None) -> RunRecord:
    """Initialize an ensemble from ``cfg`` and iterate predict/update ``cfg.n_iterations`` times."""
    driver = EnsembleKalmanInversion(problem, cfg, threads=threads)
    return driver.run(init_ensemble(cfg), truth)
