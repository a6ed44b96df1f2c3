from __future__ import annotations

from rich.table import Table

from seceki.core.management.command import BaseCommand
from seceki.core.management.command import add_experiment_arguments
from seceki.core.management.command import console
from seceki.core.management.command import parse_sizes
from seceki.harness.compare import compare_variants
from seceki.harness.experiment import resolve_output_dir


class Command(BaseCommand):
    help = "Run an experiment with and without sampling error correction"

    def __init__(self):
        super().__init__(
            description="Run the same experiment with and without the correction at one or more ensemble sizes.",
            usage="%(prog)s compare (--config PATH | --preset NAME) [--sizes K1,K2,...] [options]",
        )

    def add_arguments(self, parser):
        add_experiment_arguments(parser)
        parser.add_argument(
            "--sizes",
            type=parse_sizes,
            help="Comma-separated ensemble sizes (default: the configured size).",
        )

    def handle(self, options):
        cfg = self.experiment_config(options)
        results = compare_variants(cfg, sizes=options.sizes, out=options.out, threads=options.threads)

        table = Table(title=f"{cfg.experiment} comparison", box=None)
        table.add_column("variant", style="help")
        table.add_column("final l1 error", justify="right")
        table.add_column("final misfit", justify="right")
        for variant, result in results:
            final = result.record.final
            l1 = "-" if final.l1_error is None else f"{final.l1_error:.4e}"
            table.add_row(variant.name, l1, f"{final.data_misfit:.4e}")
        console.print(table)
        console.print(f"[success]Summary written to {resolve_output_dir(cfg, options.out) / 'summary.csv'}")
        return 0
