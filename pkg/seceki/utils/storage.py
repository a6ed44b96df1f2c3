"""Artifact persistence.

Atomic file writes (write to a temporary sibling, then rename) and a JSON
serializer mixin for dataclass-style objects holding numpy arrays.
"""

from __future__ import annotations

import dataclasses
import json
import os
import tempfile
from pathlib import Path
from typing import Any

import numpy as np

from seceki.core.exceptions import StorageError

__all__ = ("atomic_write_text", "atomic_write_bytes", "JsonSerializer", "to_jsonable")


def to_jsonable(value: Any) -> Any:
    """Convert numpy values, dataclasses and paths into JSON-compatible data."""
    if isinstance(value, JsonSerializer):
        return value.serialize()
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {field.name: to_jsonable(getattr(value, field.name)) for field in dataclasses.fields(value)}
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


class JsonSerializer:
    """
    Mixin for JSON serialization.

    Serializes public attributes (or dataclass fields) recursively, converting
    arrays to nested lists.
    """

    def serialize(self) -> dict:
        if dataclasses.is_dataclass(self):
            names = [field.name for field in dataclasses.fields(self)]
        else:
            names = sorted(key for key in self.__dict__ if not key.startswith("_"))
        return {name: to_jsonable(getattr(self, name)) for name in names}

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.serialize(), indent=indent)


def atomic_write_bytes(path: str | os.PathLike, data: bytes) -> Path:
    """
    Write ``data`` to ``path`` atomically.

    Raises:
        StorageError: If the directory cannot be created or the file written.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise
    except OSError as err:
        raise StorageError(f"Cannot write {path}: {err.strerror or err}", path=path) from err
    return path


def atomic_write_text(path: str | os.PathLike, text: str) -> Path:
    """Text variant of :func:`atomic_write_bytes` (UTF-8, ``\\n`` newlines)."""
    return atomic_write_bytes(path, text.encode("utf-8"))
