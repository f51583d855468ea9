from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, TypeVar

from covering_lab.utils.config import get_threads
from covering_lab.utils.error_logging import log_debug

T = TypeVar("T")


def run_replicas(fn: Callable[[int], T], replicas: int, threads: Optional[int] = None) -> list[T]:
    """Run fn(replica) for every replica id; results come back in replica order whatever the scheduling."""
    threads = threads or get_threads()
    log_debug("running %d replicas on %d threads", replicas, threads)
    if threads == 1 or replicas <= 1:
        return [fn(replica) for replica in range(replicas)]
    with ThreadPoolExecutor(max_workers=threads, thread_name_prefix="replica") as pool:
        return list(pool.map(fn, range(replicas)))
