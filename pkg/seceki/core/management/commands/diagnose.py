from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from rich.table import Table

from seceki.core.management.command import BaseCommand
from seceki.core.management.command import add_experiment_arguments
from seceki.core.management.command import console
from seceki.core.management.command import parse_pixel
from seceki.harness.diagnostics import check_subspace_violation
from seceki.harness.diagnostics import correlation_profile
from seceki.harness.diagnostics import correlation_sampling_stddev
from seceki.utils.storage import atomic_write_text


def write_profile(profile, path) -> Path:
    """Write a correlation profile as ``index,raw,corrected`` CSV."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("index", "raw", "corrected"))
    for i, raw, corrected in zip(profile.index, profile.raw, profile.corrected, strict=True):
        writer.writerow((int(i), repr(float(raw)), repr(float(corrected))))
    return atomic_write_text(Path(path), buffer.getvalue())


class Command(BaseCommand):
    help = "Diagnostics of sample correlations and of the ensemble subspace"

    def __init__(self):
        super().__init__(
            description=(
                "correlation-stddev: Monte-Carlo spread of sample correlations. "
                "subspace: do corrected updates leave the span of the previous ensemble? "
                "correlation-profile: raw and corrected correlations of one image pixel."
            ),
            usage="%(prog)s diagnose {correlation-stddev,subspace,correlation-profile} [options]",
        )

    def add_arguments(self, parser):
        parser.add_argument("check", choices=("correlation-stddev", "subspace", "correlation-profile"))
        parser.add_argument("--r", type=float, default=0.0, help="True correlation (correlation-stddev).")
        parser.add_argument("--k", type=int, default=10, help="Ensemble size (correlation-stddev).")
        parser.add_argument("--trials", type=int, default=100_000, help="Monte-Carlo trials (correlation-stddev).")
        parser.add_argument("--a", type=float, help="Correction exponent (default: 1, or the configured one).")
        parser.add_argument("--tol", type=float, default=1e-8, help="Span residual tolerance (subspace).")
        parser.add_argument("--pixel", type=parse_pixel, help="Measured pixel 'row,col' (correlation-profile).")
        add_experiment_arguments(parser, threads=False)

    def handle(self, options):
        if options.check == "correlation-stddev":
            return self.correlation_stddev(options)
        if options.check == "subspace":
            return self.subspace(options)
        return self.profile(options)

    def correlation_stddev(self, options):
        stddev = correlation_sampling_stddev(options.r, options.k, options.trials, seed=options.seed or 0)
        reference = (1.0 - options.r**2) / math.sqrt(options.k - 1)
        console.print(f"r={options.r:g} K={options.k} trials={options.trials}")
        console.print(f"sample stddev      {stddev:.6f}")
        console.print(f"(1 - r^2)/sqrt(K-1) {reference:.6f}")
        return 0

    def subspace(self, options):
        cfg = self.experiment_config(options) if (options.config or options.preset) else None
        a = options.a if options.a is not None else (cfg.run.sec.exponent_a if cfg is not None else 1.0)
        report = check_subspace_violation(cfg, a, tol=options.tol)

        table = Table(title=f"span residuals, a={a:g}", box=None)
        table.add_column("member", justify="right", style="help")
        table.add_column("member-relative", justify="right")
        table.add_column("increment-relative", justify="right")
        table.add_column("leaves span", justify="center")
        for k, (member, increment, violated) in enumerate(
            zip(report.member_residuals, report.increment_residuals, report.violated, strict=True)
        ):
            table.add_row(str(k + 1), f"{member:.3e}", f"{increment:.3e}", "yes" if violated else "no")
        console.print(table)
        style = "warning" if report.any_violation else "success"
        console.print(f"[{style}]{int(report.violated.sum())} of {report.violated.size} members leave the span")
        return 0

    def profile(self, options):
        if options.pixel is None:
            console.print("[error]correlation-profile needs --pixel row,col")
            return 2
        cfg = self.experiment_config(options)
        profile = correlation_profile(cfg, options.pixel, a=options.a)
        path = Path(options.out) if options.out else Path("correlation_profile.csv")
        if path.suffix != ".csv":
            path = path / "correlation_profile.csv"
        write_profile(profile, path)
        console.print(f"[success]Correlation profile of pixel {profile.pixel} (a={profile.a:g}) written to {path}")
        return 0
