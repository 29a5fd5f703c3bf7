"""Ordered parallel map capped by BANDLIM_THREADS."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ConfigError

ENV_VAR = "BANDLIM_THREADS"


def thread_count() -> int:
    """Worker count from BANDLIM_THREADS; 0 or unset means one per CPU."""
    raw = os.environ.get(ENV_VAR, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError(f"{ENV_VAR} must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def pmap(fn, items) -> list:
    """[fn(x) for x in items], possibly on threads; order is preserved."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
