"""Worker fan-out for independent point-set evaluations.

All reductions in this package are order-independent (max/min/all), and
random point sets are generated from a single seed before fan-out, so
results do not depend on the worker count.  AMCX_THREADS caps the pool.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["worker_count", "thread_map"]


def worker_count() -> int:
    env = os.environ.get("AMCX_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"AMCX_THREADS must be an integer, got {env!r}") from None
    return max(1, os.cpu_count() or 1)


def thread_map(fn, items):
    """Map preserving input order, fanning out across threads when allowed."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
