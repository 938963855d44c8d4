"""
Worker pool for embarrassingly parallel numerical batches

Scans and the verification suite split their work into independent tasks
whose results depend only on their inputs; this pool runs them on threads
and hands results back in submission order, so parallel and serial runs
agree exactly.
"""

import logging
import threading
import time
from concurrent.futures import Future, ThreadPoolExecutor
from contextlib import contextmanager
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional

from nilgeo import config

logger = logging.getLogger(__name__)


class WorkerPool:
    """
    Thread pool with task statistics.

    Results are always collected in submission order; a failing task's
    exception propagates to the caller of map_ordered.
    """

    def __init__(self, max_workers: Optional[int] = None):
        """
        Initialize the pool.

        Args:
            max_workers: Number of worker threads (defaults to NILGEO_WORKERS)
        """
        self.max_workers = max_workers if max_workers is not None else config.get_worker_count()
        self.executor = ThreadPoolExecutor(max_workers=self.max_workers, thread_name_prefix='nilgeo')
        self.lock = threading.RLock()
        self.stats = {
            'total_tasks': 0,
            'completed_tasks': 0,
            'failed_tasks': 0,
            'active_tasks': 0,
        }

    def submit(self, func: Callable, *args, **kwargs) -> Future:
        """
        Submit one task.

        Args:
            func: Function to execute
            *args: Positional arguments for the function
            **kwargs: Keyword arguments for the function

        Returns:
            Future for the task result
        """
        with self.lock:
            self.stats['total_tasks'] += 1
            self.stats['active_tasks'] += 1
        return self.executor.submit(self._execute_with_tracking, func, *args, **kwargs)

    def _execute_with_tracking(self, func: Callable, *args, **kwargs) -> Any:
        start_time = time.time()
        try:
            result = func(*args, **kwargs)
            with self.lock:
                self.stats['completed_tasks'] += 1
            logger.debug(f"Task {getattr(func, '__name__', func)} completed in {time.time() - start_time:.3f}s")
            return result
        except Exception as e:
            with self.lock:
                self.stats['failed_tasks'] += 1
            logger.error(f"Task {getattr(func, '__name__', func)} failed: {e}")
            raise
        finally:
            with self.lock:
                self.stats['active_tasks'] -= 1

    def map_ordered(self, func: Callable, items: Iterable[Any], timeout: Optional[float] = None) -> List[Any]:
        """
        Apply func to every item concurrently.

        Args:
            func: One-argument function
            items: Inputs
            timeout: Per-result wait limit in seconds

        Returns:
            Results in the order of items
        """
        futures = [self.submit(func, item) for item in items]
        return [future.result(timeout=timeout) for future in futures]

    def get_stats(self) -> Dict[str, int]:
        """Snapshot of the task counters."""
        with self.lock:
            return dict(self.stats)

    def shutdown(self, wait: bool = True):
        """Stop accepting tasks and release the threads."""
        logger.debug("Shutting down worker pool")
        self.executor.shutdown(wait=wait)


def chunk_ranges(count: int, parts: int) -> List[range]:
    """
    Split range(count) into at most `parts` contiguous non-empty ranges.

    Args:
        count: Number of items
        parts: Desired number of chunks

    Returns:
        Contiguous ranges covering 0..count-1 in order
    """
    parts = max(1, min(parts, count))
    if count <= 0:
        return []
    size, extra = divmod(count, parts)
    ranges = []
    start = 0
    for idx in range(parts):
        stop = start + size + (1 if idx < extra else 0)
        ranges.append(range(start, stop))
        start = stop
    return ranges


@contextmanager
def managed_pool(max_workers: Optional[int] = None) -> Iterator[WorkerPool]:
    """
    Context manager yielding a private pool, shut down on exit.

    Logs the task counters at debug level when the pool closes.
    """
    pool = WorkerPool(max_workers=max_workers)
    try:
        yield pool
    finally:
        pool.shutdown()
        stats = pool.get_stats()
        logger.debug(f"Worker pool ({pool.max_workers} threads) finished: {stats['completed_tasks']} completed, "
                     f"{stats['failed_tasks']} failed of {stats['total_tasks']} tasks")


def run_chunked(func: Callable[[range], Any], count: int, workers: Optional[int] = None) -> List[Any]:
    """
    Run func over contiguous index chunks, serially when workers == 1.

    Args:
        func: Receives a range of indices
        count: Total number of indices
        workers: Thread count (defaults to NILGEO_WORKERS)

    Returns:
        Per-chunk results in index order
    """
    workers = workers if workers is not None else config.get_worker_count()
    ranges = chunk_ranges(count, workers)
    if workers <= 1 or len(ranges) <= 1:
        return [func(r) for r in ranges]
    with managed_pool(workers) as pool:
        return pool.map_ordered(func, ranges)
