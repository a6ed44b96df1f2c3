"""Plot-script emission.

Runs never import a plotting library. Instead they write a small standalone
script next to the CSV files; running it with matplotlib installed draws the
l1 error and data misfit series (and the component trajectories when present).
"""

from __future__ import annotations

from pathlib import Path

from seceki.utils.storage import atomic_write_text

__all__ = ("PLOT_SCRIPT_NAME", "render_plot_script", "emit_plot_script")

PLOT_SCRIPT_NAME = "plot_metrics.py"

_TEMPLATE = '''"""Plot the metrics of the {title} run. Requires matplotlib."""

import csv
import math
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent


def read(name):
    path = HERE / name
    if not path.exists():
        return None
    with path.open(newline="") as fh:
        return list(csv.DictReader(fh))


def as_float(text):
    return float(text) if text else math.nan


def main():
    rows = read("{metrics}")
    iterations = [int(r["iteration"]) for r in rows]
    fig, (ax_err, ax_mis) = plt.subplots(1, 2, figsize=(10, 4))
    ax_err.plot(iterations, [as_float(r["l1_error"]) for r in rows], marker="o")
    ax_err.set_xlabel("iteration")
    ax_err.set_ylabel("l1 error")
    ax_mis.semilogy(iterations, [as_float(r["data_misfit"]) for r in rows], marker="o")
    ax_mis.set_xlabel("iteration")
    ax_mis.set_ylabel("data misfit")
    fig.suptitle("{title}")
    fig.tight_layout()
    fig.savefig(HERE / "metrics.png", dpi=150)

    trajectory = read("{trajectory}")
    if trajectory:
        fig, ax = plt.subplots(figsize=(6, 4))
        steps = [int(r["iteration"]) for r in trajectory]
        for name in [key for key in trajectory[0] if key != "iteration"]:
            ax.plot(steps, [as_float(r[name]) for r in trajectory], label=name)
        ax.set_xlabel("iteration")
        ax.legend()
        fig.tight_layout()
        fig.savefig(HERE / "trajectory.png", dpi=150)


if __name__ == "__main__":
    main()
'''


def render_plot_script(title: str, metrics: str = "metrics.csv", trajectory: str = "trajectory.csv") -> str:
    return _TEMPLATE.format(title=title, metrics=metrics, trajectory=trajectory)


def emit_plot_script(directory, title: str, metrics: str = "metrics.csv", trajectory: str = "trajectory.csv") -> Path:
    path = Path(directory) / PLOT_SCRIPT_NAME
    return atomic_write_text(path, render_plot_script(title, metrics, trajectory))
