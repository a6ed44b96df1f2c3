"""Management"""

from __future__ import annotations

import importlib
import os
import pkgutil
import sys

from rich.markup import escape
from rich.table import Table

from seceki.core.exceptions import SecekiError
from seceki.core.management.command import BaseCommand
from seceki.core.management.command import console
from seceki.utils.log import get_seceki_logger
from seceki.utils.version import vernum

__all__ = ("ManagementUtility", "execute_from_command_line")

logger = get_seceki_logger(__name__)


class ManagementUtility:
    """Discovers and runs the seceki commands.

    Every module in ``commands_package`` that defines a ``BaseCommand``
    subclass becomes a command named after the module.
    """

    def __init__(self, argv: list[str] | None = None, commands_package="seceki.core.management.commands"):
        self.argv = argv or sys.argv[:]
        self.prog_name = os.path.basename(self.argv[0])
        if self.prog_name == "__main__.py":
            self.prog_name = "python -m seceki"
        self.commands_package = commands_package
        self.commands: dict[str, type[BaseCommand]] = self.discover_commands()

    def discover_commands(self) -> dict[str, type[BaseCommand]]:
        commands = {}
        try:
            package = importlib.import_module(self.commands_package)
        except ImportError:
            console.print(f"[error]Could not import commands package: {self.commands_package}")
            return commands

        for _, name, is_pkg in pkgutil.iter_modules(package.__path__):
            if is_pkg or name.startswith("_"):
                continue
            module = importlib.import_module(f"{self.commands_package}.{name}")
            for attr in dir(module):
                obj = getattr(module, attr)
                if isinstance(obj, type) and issubclass(obj, BaseCommand) and obj is not BaseCommand:
                    commands[name] = obj
        return commands

    def main_help(self):
        """
        Print help for all available commands using rich formatting.
        """
        console.print(
            f"'[bold]{self.prog_name} help <command>[/bold]' for help on a specific command.",
            style="help",
        )
        commands = Table(box=None)
        commands.add_column("Commands:", header_style="underline", style="help")
        commands.add_column(style="desc")
        for name in sorted(self.commands):
            commands.add_row(name, self.commands[name].help)
        commands.add_row("version", "Display the seceki version")
        commands.add_row("help", "Display help for a command")

        options = Table(show_header=True, box=None)
        options.add_column("Global Options:", header_style="underline", style="help")
        options.add_column(style="desc")
        options.add_row("-q, --quiet", "Only log warnings and errors.")
        options.add_row("-v, --verbose", "Log per-iteration details.")
        options.add_row("    --no-color", "Don't colorize the command output.")
        options.add_row("    --settings", "Python path of a settings module [env: SECEKI_SETTINGS_MODULE=].")
        options.add_row("-h, --help", "Display the concise help for this command.")
        options.add_row("-V, --version", "Show the seceki version number and exit.")

        console.print()
        console.print(commands)
        console.print()
        console.print(options)

    def fetch_command(self, name) -> BaseCommand | None:
        """
        Return an instance of the command for the given name.
        """
        command_cls = self.commands.get(name)
        if command_cls is None:
            return None
        return command_cls()

    def execute(self) -> int:
        """Given the command-line arguments, figure out which command and run it."""
        try:
            command = self.argv[1]
        except IndexError:
            command = "help"

        if command in ("help", "-h", "--help"):
            topic = self.argv[2] if len(self.argv) > 2 else None
            command_obj = self.fetch_command(topic)
            if command_obj:
                command_obj.print_help(self.prog_name)
            else:
                self.main_help()
            return 0
        if command in ("version", "-V", "--version"):
            console.print(f"[success]{vernum}")
            return 0

        command_obj = self.fetch_command(command)
        if command_obj is None:
            console.print(f"[error]Unknown command: {command!r}")
            console.print(f"Type '{self.prog_name} help' for usage.")
            return 2

        try:
            return command_obj.execute([self.prog_name, *self.argv[1:]])
        except SecekiError as err:
            logger.debug("Command %s failed", command, extra={"error": err.as_dict()})
            console.print(f"[error]{err.__class__.__name__}: {escape(str(err))}")
            return err.exit_code
        except KeyboardInterrupt:
            console.print("[warning]Interrupted")
            return 130


# The CLI entry point of seceki.
def execute_from_command_line(argv: list[str] | None = None) -> int:
    """Run Management Utility and return the process exit code."""
    os.environ["SECEKI_VERSION"] = str(vernum)
    utility = ManagementUtility(argv)
    return utility.execute()
