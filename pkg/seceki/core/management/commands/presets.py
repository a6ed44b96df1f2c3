from __future__ import annotations

import json

from rich.table import Table

from seceki.core.management.command import BaseCommand
from seceki.core.management.command import console
from seceki.harness.factory import build_model
from seceki.harness.presets import load_preset
from seceki.harness.presets import preset_document
from seceki.harness.presets import preset_names


class Command(BaseCommand):
    help = "List or show the built-in experiment configurations"

    def __init__(self):
        super().__init__(
            description="List the built-in presets, or print one as a configuration `run --config` accepts.",
            usage="%(prog)s presets {list,show} [NAME]",
        )

    def add_arguments(self, parser):
        parser.add_argument("action", nargs="?", choices=("list", "show"), default="list")
        parser.add_argument("name", nargs="?", help="Preset to print with `show`.")

    def handle(self, options):
        if options.action == "show":
            if not options.name:
                console.print("[error]`presets show` needs a preset name")
                return 2
            console.print_json(json.dumps(preset_document(options.name)))
            return 0

        table = Table(box=None)
        table.add_column("preset", style="help")
        for column in ("N", "M", "K", "a", "lambda", "p"):
            table.add_column(column, justify="right")
        for name in preset_names():
            cfg = load_preset(name)
            model = build_model(cfg)
            a = f"{cfg.run.sec.exponent_a:g}" if cfg.run.sec.active else "off"
            lam, p = ("-", "-") if cfg.reg is None else (f"{cfg.reg.lam:g}", f"{cfg.reg.p:g}")
            table.add_row(name, str(model.input_dim), str(model.output_dim), str(cfg.run.ensemble_size), a, lam, p)
        console.print(table)
        return 0
