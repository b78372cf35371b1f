"""Chunked fan-out of search roots over a process pool."""

import concurrent.futures
import logging
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def deal(items: Sequence[T], chunks: int) -> List[List[T]]:
    """Deal items round-robin into at most ``chunks`` non-empty lists."""
    chunks = max(1, min(chunks, len(items)))
    return [list(items[i::chunks]) for i in range(chunks)] if items else [[]]


def run_chunks(worker: Callable[..., R], chunks: List[List[T]], threads: int, *args) -> List[R]:
    """
    Run ``worker(chunk, *args)`` for every chunk and return results in chunk order.

    With one thread (or one chunk) everything runs inline; otherwise the chunks
    go to a ProcessPoolExecutor, so ``worker`` must be a module-level function
    and ``args`` must pickle.
    """
    if threads == 1 or len(chunks) == 1:
        return [worker(chunk, *args) for chunk in chunks]

    logger.debug("dispatching %d chunks of %s to %d workers", len(chunks), worker.__name__, threads)
    with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as executor:
        futures = [executor.submit(worker, chunk, *args) for chunk in chunks]
        return [future.result() for future in futures]
