"""
seceki Logging Utilities

Per-module loggers for the solver and the harness:
- Colored console output (only when stderr is a TTY).
- Optional JSON formatting for structured logs.
- Debug/production console handlers selected by ``settings.DEBUG``; the
  debug one adds the source file and line to every record.
- Environment variable overrides for log level and an optional rotating log file.

Usage:
    from seceki.utils.log import get_seceki_logger
    logger = get_seceki_logger(__name__)
    logger.info("iteration %d misfit %.3e", n, misfit)

Environment:
    SECEKI_LOG_LEVEL   default INFO
    SECEKI_LOG_FILE    when set, also log to this rotating file
    SECEKI_LOG_JSON    when set to 1, format records as JSON
"""

from __future__ import annotations

import json
import logging
import os
import sys
from logging.handlers import RotatingFileHandler

from seceki.conf import settings

__all__ = (
    "RequireDebugFalse",
    "RequireDebugTrue",
    "ColoredFormatter",
    "JSONFormatter",
    "get_seceki_logger",
    "set_level",
)


class RequireDebugFalse(logging.Filter):
    """Filter that only passes records when settings.DEBUG is False."""

    def filter(self, record):
        return not settings.DEBUG


class RequireDebugTrue(logging.Filter):
    """Filter that only passes records when settings.DEBUG is True."""

    def filter(self, record):
        return settings.DEBUG


class ColoredFormatter(logging.Formatter):
    """
    Formatter that adds ANSI color codes to log output for terminals.
    Colors can be disabled by setting use_color=False.
    """

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[41m",
    }
    RESET = "\033[0m"

    def __init__(self, fmt=None, datefmt=None, style="%", use_color=True):
        super().__init__(fmt, datefmt, style)
        self.use_color = use_color

    def format(self, record):
        message = super().format(record)
        if self.use_color and sys.stderr.isatty():
            color = self.COLORS.get(record.levelname, self.RESET)
            message = f"{color}{message}{self.RESET}"
        return message


class JSONFormatter(logging.Formatter):
    """Formatter that outputs one JSON object per record."""

    def format(self, record):
        log_record = {
            "time": self.formatTime(record, self.datefmt),
            "level": record.levelname,
            "name": record.name,
            "message": record.getMessage(),
            "lineno": record.lineno,
            "funcName": record.funcName,
        }
        if record.exc_info:
            log_record["exc_info"] = self.formatException(record.exc_info)
        return json.dumps(log_record)


LOG_FORMAT = "[%(asctime)s] %(levelname)s %(name)s: %(message)s"
DEBUG_FORMAT = "[%(asctime)s] %(levelname)s %(name)s %(filename)s:%(lineno)d: %(message)s"
LOG_LEVEL = os.environ.get("SECEKI_LOG_LEVEL", "INFO").upper()
LOG_FILE = os.environ.get("SECEKI_LOG_FILE")
LOG_JSON = os.environ.get("SECEKI_LOG_JSON") == "1"

_ROOT = "seceki"

# exactly one console handler passes each record, depending on settings.DEBUG
_CONSOLES = (("console", LOG_FORMAT, RequireDebugFalse), ("debug_console", DEBUG_FORMAT, RequireDebugTrue))


def _root_logger() -> logging.Logger:
    logger = logging.getLogger(_ROOT)
    if not logger.handlers:
        logger.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))
        for name, fmt, debug_filter in _CONSOLES:
            console = logging.StreamHandler()
            console.set_name(name)
            console.addFilter(debug_filter())
            console.setFormatter(JSONFormatter() if LOG_JSON else ColoredFormatter(fmt))
            logger.addHandler(console)
        if LOG_FILE:
            fh = RotatingFileHandler(LOG_FILE, maxBytes=1_000_000, backupCount=3)
            fh.setFormatter(JSONFormatter() if LOG_JSON else logging.Formatter(LOG_FORMAT))
            logger.addHandler(fh)
        logger.propagate = False
    return logger


def get_seceki_logger(module_name=None):
    """
    Get a per-module logger below the shared ``seceki`` logger.

    Args:
        module_name (str, optional): The module name (e.g., __name__).

    Returns:
        logging.Logger: Child logger that inherits the root handlers.
    """
    _root_logger()
    if not module_name or module_name == _ROOT:
        return logging.getLogger(_ROOT)
    if module_name.startswith(_ROOT + "."):
        module_name = module_name[len(_ROOT) + 1 :]
    return logging.getLogger(f"{_ROOT}.{module_name}")


def set_level(level):
    """Set the level of the shared ``seceki`` logger (used by -q / -v)."""
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.INFO)
    _root_logger().setLevel(level)
