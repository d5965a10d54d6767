"""Bounded async worker pool for blocking numeric work."""

import asyncio
import logging
import os
from typing import Any, Callable, Iterable, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class WorkerPool:
    """Run blocking callables in threads, at most `workers` at a time."""

    def __init__(self, workers: int | None = None):
        self.workers = max(1, workers or os.cpu_count() or 1)
        self._semaphore: asyncio.Semaphore | None = None

    @property
    def semaphore(self) -> asyncio.Semaphore:
        # created lazily so the pool can be built outside a running loop
        if self._semaphore is None:
            self._semaphore = asyncio.Semaphore(self.workers)
        return self._semaphore

    async def run(self, func: Callable[..., R], *args: Any, **kwargs: Any) -> R:
        """Run one call in a worker thread once a slot is free."""
        async with self.semaphore:
            return await asyncio.to_thread(func, *args, **kwargs)

    async def map_ordered(self, func: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """
        Apply func to every item concurrently.

        Returns:
            Results in input order, independent of completion order
        """
        items = list(items)
        if self.workers == 1:
            return [func(item) for item in items]
        tasks = [self.run(func, item) for item in items]
        results = await asyncio.gather(*tasks)
        logger.debug(f"WorkerPool finished {len(results)} tasks on {self.workers} workers")
        return list(results)
