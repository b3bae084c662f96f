"""Small shared helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence


def thread_cap() -> int:
    """Worker cap from MOMENTLAB_THREADS (default 1 = serial)."""
    try:
        return max(1, int(os.environ.get("MOMENTLAB_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Order-preserving map, threaded when MOMENTLAB_THREADS allows it.

    Results are identical to the serial map regardless of scheduling.
    """
    items = list(items)
    cap = thread_cap()
    if cap <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, items))
