"""
seceki Exceptions

Defines the exception hierarchy used across the solver, the forward models
and the experiment harness. Every exception carries a machine-readable
``code``, optional keyword context for structured logging, and the process
exit code the CLI reports when it escapes a command.

Exit codes:
- 2: configuration errors (schema violations, invalid run settings, invalid
  arguments, mismatched dimensions)
- 3: numerical failures (non-SPD solves, blow-ups, forward-model failures)
- 4: I/O failures (unreadable or malformed files, unwritable outputs)

Usage:
    raise ConfigError(key="run.n_iterations", value=0, reason="must be >= 1")
    raise NumericalError("Cholesky factorization failed", pivot=3)
    raise ParseError("bad magic number", offset=0, path="img.pgm")
"""

from __future__ import annotations

__all__ = (
    "SecekiError",
    "StructuralError",
    "ValidationError",
    "ImproperlyConfigured",
    "ConfigError",
    "NotRegistered",
    "AlreadyRegistered",
    "NumericalError",
    "ForwardModelError",
    "StorageError",
    "ParseError",
)


class SecekiError(Exception):
    """
    Base class for all seceki-specific exceptions.

    Args:
        message (str): Human-readable error message.
        code (str, optional): Error code for programmatic handling.
        **kwargs: Additional context for debugging.
    """

    default_code = "seceki_error"
    exit_code = 1

    def __init__(self, message=None, *args, code=None, **kwargs):
        if message is None:
            message = self.__class__.__doc__ or "SecekiError"
        super().__init__(message, *args)
        self.message = message
        self.code = code or self.default_code
        self.extra = {key: value for key, value in kwargs.items() if value is not None}

    def __str__(self):
        base = super().__str__()
        context = []
        if self.code:
            context.append(f"code={self.code}")
        if self.extra:
            context.append(f"context={self.extra}")
        return f"{base}" + (f" | {'; '.join(context)}" if context else "")

    def as_dict(self):
        """Return a dict representation of the exception for structured logging."""
        return {
            "type": self.__class__.__name__,
            "message": self.message,
            "code": self.code,
            "extra": self.extra,
        }


class StructuralError(SecekiError, ValueError):
    """Shapes or ensemble sizes of the inputs do not fit together."""

    default_code = "structural_error"
    exit_code = 2


class ValidationError(SecekiError, ValueError):
    """
    Raised when an argument value is invalid.

    Args:
        field (str): The field or parameter name.
        value: The invalid value.
        reason (str): Reason for invalidity.
    """

    default_code = "validation_error"
    exit_code = 2

    def __init__(self, *args, field=None, value=None, reason=None, **kwargs):
        msg = f"Invalid value for {field!r}: {value!r} ({reason})" if field else "Validation error"
        super().__init__(msg, *args, field=field, value=value, reason=reason, **kwargs)
        self.field = field
        self.value = value
        self.reason = reason


class ImproperlyConfigured(SecekiError):
    """seceki is improperly configured (missing or invalid settings)."""

    default_code = "improperly_configured"
    exit_code = 2


class ConfigError(ImproperlyConfigured, ValueError):
    """
    Raised when an experiment configuration violates its schema.

    Args:
        key (str): Dotted path of the offending key, e.g. ``run.ensemble_size``.
        value: The offending value, if any.
        reason (str): Reason for rejection.
    """

    default_code = "config_error"

    def __init__(self, *args, key=None, value=None, reason=None, **kwargs):
        msg = f"Invalid configuration key {key!r}: {reason}" if key else (reason or "Invalid configuration")
        super().__init__(msg, *args, key=key, value=value, **kwargs)
        self.key = key
        self.value = value
        self.reason = reason


class NotRegistered(ImproperlyConfigured):
    """A required forward model is not registered."""

    default_code = "not_registered"


class AlreadyRegistered(ImproperlyConfigured):
    """Attempted to register a forward model name twice."""

    default_code = "already_registered"


class NumericalError(SecekiError, ArithmeticError):
    """
    Raised when a numerical kernel fails.

    Args:
        pivot (int, optional): Failing pivot index of a Cholesky factorization.
        iterations (int, optional): Iteration count of a non-converged solver.
    """

    default_code = "numerical_error"
    exit_code = 3

    def __init__(self, message=None, *args, pivot=None, iterations=None, **kwargs):
        super().__init__(message, *args, pivot=pivot, iterations=iterations, **kwargs)
        self.pivot = pivot
        self.iterations = iterations


class ForwardModelError(NumericalError):
    """
    Raised when the forward model fails on an ensemble member.

    Args:
        member (int): Index of the failing ensemble member.
    """

    default_code = "forward_model_error"

    def __init__(self, *args, member=None, reason=None, **kwargs):
        msg = f"Forward model failed on member {member}: {reason}"
        super().__init__(msg, *args, member=member, **kwargs)
        self.member = member
        self.reason = reason


class StorageError(SecekiError, OSError):
    """
    Raised when reading or writing an artifact fails.

    Args:
        path (str): The file involved.
    """

    default_code = "storage_error"
    exit_code = 4

    def __init__(self, message=None, *args, path=None, **kwargs):
        super().__init__(message, *args, path=str(path) if path is not None else None, **kwargs)
        self.path = path


class ParseError(StorageError):
    """
    Raised when a file is malformed.

    Args:
        offset (int): Byte offset at which parsing failed.
    """

    default_code = "parse_error"

    def __init__(self, message=None, *args, offset=None, path=None, **kwargs):
        super().__init__(f"{message} at byte offset {offset}", *args, path=path, offset=offset, **kwargs)
        self.offset = offset
