from __future__ import annotations

from rich.table import Table

from seceki.core.management.command import BaseCommand
from seceki.core.management.command import add_experiment_arguments
from seceki.core.management.command import console
from seceki.harness.experiment import run_experiment


def _fmt(value) -> str:
    return "-" if value is None else f"{value:.4e}"


class Command(BaseCommand):
    help = "Run one experiment and write its artifacts"

    def __init__(self):
        super().__init__(
            description="Run an experiment from a configuration file or a preset.",
            usage="%(prog)s run (--config PATH | --preset NAME) [options]",
        )

    def add_arguments(self, parser):
        add_experiment_arguments(parser)

    def handle(self, options):
        cfg = self.experiment_config(options)
        result = run_experiment(cfg, out=options.out, threads=options.threads)

        table = Table(title=f"{cfg.experiment} (seed {cfg.run.rng_seed})", box=None)
        table.add_column("iteration", justify="right", style="help")
        table.add_column("l1 error", justify="right")
        table.add_column("data misfit", justify="right")
        for row in [result.record.initial, *result.record.iterations]:
            table.add_row(str(row.iteration), _fmt(row.l1_error), _fmt(row.data_misfit))
        console.print(table)
        for key in ("psnr_measurement", "psnr_estimate"):
            if key in result.summary:
                console.print(f"{key}: {result.summary[key]:.2f} dB")
        console.print(f"[success]Artifacts written to {result.output_dir}")
        return 0
