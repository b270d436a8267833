"""Order-preserving map over worker processes; output never depends on the worker count."""

import logging
from multiprocessing import Pool
from typing import Callable, Iterable, List, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Apply ``func`` to every item, results in input order.

    ``func`` must be a module-level function so it can be pickled.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug("Dispatching %d tasks to %d workers", len(items), workers)
    with Pool(processes=min(workers, len(items))) as pool:
        return pool.map(func, items)


def shard_range(total: int, shards: int) -> List[range]:
    """Split range(total) into contiguous shards, in index order"""
    shards = max(1, min(shards, total)) if total else 1
    size, extra = divmod(total, shards)
    out = []
    start = 0
    for i in range(shards):
        stop = start + size + (1 if i < extra else 0)
        out.append(range(start, stop))
        start = stop
    return out


def chunked(seq: Sequence[T], size: int) -> List[Sequence[T]]:
    return [seq[i:i + size] for i in range(0, len(seq), size)]
