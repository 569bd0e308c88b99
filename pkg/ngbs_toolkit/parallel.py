"""
Parallel - Order-preserving map over independent work items
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar('T')
R = TypeVar('R')

logger = logging.getLogger(__name__)


def map_ordered(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Apply func to every item, returning results in input order

    Work items must be picklable module-level data when workers > 1. Results
    never depend on the worker count because every item is evaluated by the
    same pure function and collected in canonical order.

    Args:
        func: Module-level function of one argument
        items: Work items
        workers: Number of worker processes (1 runs in-process)

    Returns:
        List of results aligned with items
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug("Distributing %d work items over %d workers", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
