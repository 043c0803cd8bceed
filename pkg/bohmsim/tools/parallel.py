"""
bohmsim/tools/parallel.py
Order-preserving parallel map capped by settings.THREADS.
"""
from __future__ import annotations

import concurrent.futures as cf
import logging
from typing import Callable, Iterable, TypeVar

from bohmsim.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], max_workers: int | None = None) -> list[R]:
    """
    Apply `fn` to every item on a thread pool; results come back in input
    order whatever the completion order. The first exception is re-raised.
    """
    items = list(items)
    workers = min(max_workers or settings.THREADS, settings.THREADS, max(1, len(items)))
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug("parallel_map: %d items on %d threads", len(items), workers)
    with cf.ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
