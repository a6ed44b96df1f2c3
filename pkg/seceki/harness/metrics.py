"""CSV artifacts of a run.

All numbers are written with ``settings.CSV_PRECISION`` significant digits
(17 by default, enough to round-trip a double), so re-emitting a record
produces a byte-identical file.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from seceki.conf import settings
from seceki.core.exceptions import ValidationError
from seceki.eki.problem import RunRecord
from seceki.utils.log import get_seceki_logger
from seceki.utils.storage import atomic_write_text

__all__ = (
    "METRICS_HEADER",
    "MetricsRow",
    "metrics_rows",
    "emit_metrics",
    "emit_vector",
    "emit_trajectory",
    "read_metrics",
)

logger = get_seceki_logger(__name__)

METRICS_HEADER = ("iteration", "l1_error", "data_misfit", "wall_time_seconds")


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return f"{float(value):.{settings.CSV_PRECISION}g}"


@dataclass(frozen=True)
class MetricsRow:
    iteration: int
    l1_error: float | None
    data_misfit: float
    wall_time_seconds: float

    def as_csv(self) -> list[str]:
        return [str(self.iteration), _fmt(self.l1_error), _fmt(self.data_misfit), _fmt(self.wall_time_seconds)]


def metrics_rows(record: RunRecord) -> list[MetricsRow]:
    rows = [MetricsRow(e.iteration, e.l1_error, e.data_misfit, e.wall_time_seconds) for e in record.iterations]
    if any(b.iteration <= a.iteration for a, b in zip(rows, rows[1:])) or (rows and rows[0].iteration < 1):
        raise ValidationError(field="iteration", value=[r.iteration for r in rows], reason="must increase strictly from 1")
    return rows


def _write_csv(path: Path, header, rows) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if header:
        writer.writerow(header)
    writer.writerows(rows)
    atomic_write_text(path, buffer.getvalue())
    return path


def emit_metrics(record: RunRecord, path) -> Path:
    """
    Write ``iteration,l1_error,data_misfit,wall_time_seconds``, one row per iteration.

    Raises:
        ValidationError: If the record has no iterations.
        StorageError: If the file cannot be written.
    """
    if not len(record):
        raise ValidationError(field="record", value=0, reason="a run record needs at least one iteration")
    path = _write_csv(Path(path), METRICS_HEADER, [row.as_csv() for row in metrics_rows(record)])
    logger.info("Wrote metrics for %d iterations to %s", len(record), path)
    return path


def emit_vector(vector, path) -> Path:
    """One value per line, no header."""
    return _write_csv(Path(path), None, [[_fmt(v)] for v in np.asarray(vector, dtype=float).ravel()])


def emit_trajectory(record: RunRecord, path, components: int = 4) -> Path:
    """Estimate of the first ``components`` unknowns per iteration, starting with iteration 0."""
    entries = [record.initial, *record.iterations]
    count = min(components, entries[0].estimate.size)
    header = ["iteration", *(f"u{i + 1}" for i in range(count))]
    rows = [[str(e.iteration), *(_fmt(v) for v in e.estimate[:count])] for e in entries]
    return _write_csv(Path(path), header, rows)


def read_metrics(path) -> list[MetricsRow]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [
            MetricsRow(
                iteration=int(row["iteration"]),
                l1_error=float(row["l1_error"]) if row["l1_error"] else None,
                data_misfit=float(row["data_misfit"]),
                wall_time_seconds=float(row["wall_time_seconds"]),
            )
            for row in reader
        ]
