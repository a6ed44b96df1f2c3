from __future__ import annotations

import argparse
import os

from rich.console import Console
from rich.theme import Theme

from seceki.conf import settings
from seceki.core.exceptions import ConfigError
from seceki.harness.config import load_config
from seceki.harness.presets import load_preset
from seceki.utils.log import set_level
from seceki.utils.version import vernum

console = Console(
    theme=Theme(
        {
            "help": "bold cyan",
            "desc": "dim white",
            "error": "bold red",
            "success": "bold green",
            "warning": "yellow",
        }
    )
)


def handle_default_options(options):
    """
    Apply the options every command accepts before the command itself runs.
    """
    if getattr(options, "settings", None):
        os.environ["SECEKI_SETTINGS_MODULE"] = options.settings
        settings.reset()
    if getattr(options, "quiet", False):
        set_level("WARNING")
    elif getattr(options, "verbose", False):
        set_level("DEBUG")
    if getattr(options, "no_color", False):
        console.no_color = True


def parse_pixel(text: str) -> tuple[int, int]:
    try:
        row, col = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'row,col', got {text!r}") from None
    return row, col


def parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not sizes:
        raise argparse.ArgumentTypeError("expected at least one ensemble size")
    return sizes


def add_experiment_arguments(parser, threads=True):
    """The options shared by the commands that run experiments."""
    source = parser.add_argument_group("experiment")
    source.add_argument("--config", help="Path to an experiment configuration (JSON).")
    source.add_argument("--preset", help="Name of a built-in experiment configuration.")
    source.add_argument("--seed", type=int, help="Override run.rng_seed.")
    source.add_argument("--out", help="Output directory (default: output_dir or OUTPUT_DIR/<experiment>).")
    source.add_argument("--image", help="Image file for the true unknown of an image experiment (PGM, PNG, ...).")
    if threads:
        source.add_argument("--threads", type=int, help="Worker threads for forward evaluations.")


class BaseCommand:
    """
    Several attributes affect behavior at various steps along the way:

    ``help``
        A short description of the command, which will be printed in
        help messages.
    """

    help = ""

    def __init__(self, description, usage=None):
        self.usage = usage or "%(prog)s <command> [options] [args]"
        self.description = description
        self.version = str(vernum)

    def parser(self, prog_name, **kwargs):
        """Create and return the ``ArgumentParser`` which will be used to parse the arguments to this command."""

        parser = argparse.ArgumentParser(
            prog=os.path.basename(prog_name),
            usage=self.usage,
            description=self.description,
            epilog="Use `seceki help <command>` for more options",
        )

        self.add_arguments(parser)

        parser.add_argument("-q", "--quiet", action="store_true", help="Only log warnings and errors.")
        parser.add_argument("-v", "--verbose", action="store_true", help="Log per-iteration details.")
        parser.add_argument("--no-color", action="store_true", help="Don't colorize the command output.")
        parser.add_argument(
            "--settings",
            help="Python path of a settings module [env: SECEKI_SETTINGS_MODULE=].",
        )
        parser.add_argument(
            "-V",
            "--version",
            action="version",
            version=self.version,
            help="Show the seceki version number and exit.",
        )
        return parser

    def print_help(self, prog_name):
        """Print the help message for this command."""
        console.print(self.parser(prog_name).format_help())

    def execute(self, argv) -> int:
        """Parse ``argv[2:]`` and run :meth:`handle`; returns the exit code."""
        parser = self.parser(argv[0])
        options = parser.parse_args(argv[2:])
        handle_default_options(options)
        return self.handle(options) or 0

    def experiment_config(self, options):
        """Resolve ``--config`` / ``--preset`` and apply ``--seed`` and ``--image``."""
        config_path = getattr(options, "config", None)
        preset = getattr(options, "preset", None)
        if config_path and preset:
            raise ConfigError(key="--config", reason="give either --config or --preset, not both")
        if config_path:
            cfg = load_config(config_path)
        elif preset:
            cfg = load_preset(preset)
        else:
            raise ConfigError(key="--config", reason="a configuration file or --preset is required")
        if getattr(options, "seed", None) is not None:
            cfg = cfg.with_overrides({"run.rng_seed": options.seed})
        if getattr(options, "image", None):
            cfg = cfg.with_overrides({"truth.params.path": options.image})
        return cfg

    def add_arguments(self, parser):
        """Entry point for subclassed commands to add custom arguments."""
        raise NotImplementedError("subclasses of BaseCommand must provide a add_arguments() method")

    def handle(self, options):
        """The actual logic of the command. Subclasses must implement this method."""
        raise NotImplementedError("subclasses of BaseCommand must provide a handle() method")
