"""
Worker pools for the counting sweeps and pair tables
"""
import concurrent.futures
from typing import Any, Callable, List, Optional, Sequence
import logging

from tqdm import tqdm

logger = logging.getLogger("sigcy.parallel")


def process_concurrently(
    items: Sequence[Any],
    process_func: Callable,
    max_workers: int = 4,
    description: str = "Processing",
    show_progress: bool = False
) -> List[Any]:
    """
    Process items concurrently with progress tracking

    Results come back in input order so that reductions over them are
    deterministic regardless of the worker count.

    Args:
        items: Items to process
        process_func: Function applied to each item
        max_workers: Maximum number of concurrent workers
        description: Description for progress bar
        show_progress: Whether to show progress bar

    Returns:
        List of results aligned with items (None for failed items)

    Example:
        partial_sums = process_concurrently(
            x0_batches,
            kernel.batch_sum,
            max_workers=8,
            description="count_X p=97"
        )
    """
    results: List[Any] = [None] * len(items)
    max_workers = max(1, max_workers)

    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_index = {
            executor.submit(process_func, item): i for i, item in enumerate(items)
        }

        iterator = concurrent.futures.as_completed(future_to_index)

        if show_progress:
            iterator = tqdm(iterator, total=len(items), desc=description, leave=False)

        for future in iterator:
            index = future_to_index[future]
            try:
                results[index] = future.result()
            except Exception as e:
                logger.error(f"Failed processing item {index} ({items[index]!r}): {e}")
                results[index] = None

    return results


def batch_process(
    items: Sequence[Any],
    process_func: Callable[[List[Any]], Any],
    batch_size: int = 4,
    max_workers: int = 4,
    description: str = "Batch processing",
    show_progress: bool = False
) -> List[Any]:
    """
    Process items in batches concurrently

    The counting kernels hand over ranges of the first coordinate this way;
    each batch is one vectorized numpy pass.

    Args:
        items: Items to process
        process_func: Function that processes a batch of items
        batch_size: Number of items per batch
        max_workers: Maximum concurrent batches
        description: Description for progress bar
        show_progress: Whether to show progress bar

    Returns:
        List of batch results, in batch order
    """
    items = list(items)
    batch_size = max(1, batch_size)
    batches = [items[i:i + batch_size] for i in range(0, len(items), batch_size)]

    logger.debug(f"Processing {len(items)} items in {len(batches)} batches")

    return process_concurrently(
        batches,
        process_func,
        max_workers=max_workers,
        description=description,
        show_progress=show_progress,
    )


def parallel_map(
    func: Callable,
    items: Sequence[Any],
    max_workers: Optional[int] = None
) -> List[Any]:
    """
    Simple parallel map (exceptions propagate)

    Args:
        func: Function to map
        items: Items to map over
        max_workers: Maximum workers (defaults to CPU count)

    Returns:
        List of results
    """
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(func, items))
