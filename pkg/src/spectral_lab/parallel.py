"""Order-preserving map over grid points, optionally in worker processes."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "SPECTRAL_LAB_THREADS"


def max_workers() -> int:
    """Parallelism cap from ``SPECTRAL_LAB_THREADS`` (default 1: serial)."""
    raw = os.environ.get(ENV_VAR, "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, min(n, os.cpu_count() or 1))


def pmap(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> list[R]:
    items = list(items)
    n = max_workers() if workers is None else max(1, workers)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
