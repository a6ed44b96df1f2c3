"""
seceki command-line entrypoint.

Usage Examples:
    python -m seceki run --preset toy
    python -m seceki run --config experiment.json --out runs/cs --seed 7
    python -m seceki compare --preset deblurring --sizes 10,50
    python -m seceki diagnose correlation-stddev --r 0.5 --k 40 --trials 100000
    python -m seceki diagnose subspace --a 1
    python -m seceki presets list

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

from seceki.core.management import execute_from_command_line

__all__ = ("execute_from_command_line",)

if __name__ == "__main__":
    raise SystemExit(execute_from_command_line())
