"""Thread-level parallelism over independent work units (time points)."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "FRACEVO_THREADS"


def max_workers() -> int:
    """Worker cap from ``FRACEVO_THREADS`` (default: CPU count, at least 1)."""
    raw = os.environ.get(ENV_VAR, "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}") from None
        if n < 1:
            raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}")
        return n
    return max(1, os.cpu_count() or 1)


def thread_map(fn, items) -> list:
    """``[fn(x) for x in items]``, run on up to ``max_workers()`` threads."""
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
