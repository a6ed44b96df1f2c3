"""
seceki

Ensemble Kalman inversion with power-law sampling error correction and
lp regularization, plus the forward models and the experiment harness
used to study it.

- ``seceki.eki``       the ensemble Kalman update and the iteration driver
- ``seceki.sec``       sampling error correction of covariance blocks
- ``seceki.lp``        lp regularization through an augmented problem
- ``seceki.models``    identity/linear, Gaussian blur, Lorenz96, Darcy, PGM I/O
- ``seceki.harness``   configurations, presets, runs and diagnostics
"""

from __future__ import annotations

from seceki.utils.version import vernum

__all__ = ("__version__",)

__version__ = str(vernum)
