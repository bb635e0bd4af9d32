"""Worker-count policy shared by the sampling and sweep code paths.

The environment variable ``RINGDIST_THREADS`` caps worker parallelism;
the default is the machine's CPU count. Work is always partitioned by
index, never by worker, so results are identical for any thread count.
"""

from __future__ import annotations

import os

from .errors import ConfigurationError


def worker_count() -> int:
    raw = os.environ.get("RINGDIST_THREADS")
    if raw is None:
        return max(1, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"RINGDIST_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigurationError(f"RINGDIST_THREADS must be >= 1, got {n}")
    return n
