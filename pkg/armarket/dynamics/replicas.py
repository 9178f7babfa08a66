"""
Replica seeding and execution.

Every replica owns its random stream, derived from the master seed by the
sub-seeding rule

    SeedSequence(seed, spawn_key=(replica_index,))

so replica r produces the same numbers whether it runs alone, first, last,
or on another process. ``run_replicas`` returns results in replica-index
order for any worker count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, TypeVar

import numpy as np

from armarket.settings import RUNTIME_CONFIG

logger = logging.getLogger(__name__)

T = TypeVar("T")


def replica_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for replica ``index`` of a run with master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _run_one(fn: Callable[[int, np.random.Generator], T], seed: int, index: int) -> T:
    return fn(index, replica_rng(seed, index))


def run_replicas(
    fn: Callable[[int, np.random.Generator], T],
    n_replicas: int,
    seed: int,
    workers: Optional[int] = None,
) -> List[T]:
    """
    Run ``fn(index, rng)`` for every replica.

    Args:
        fn        : Picklable (module-level or functools.partial) work function
        n_replicas: Number of replicas
        seed      : Master seed
        workers   : Process count; defaults to ARMARKET_WORKERS. 1 runs inline.

    Returns:
        Results ordered by replica index
    """
    workers = RUNTIME_CONFIG["workers"] if workers is None else workers
    if workers <= 1 or n_replicas == 1:
        return [_run_one(fn, seed, i) for i in range(n_replicas)]

    logger.debug("running %d replicas on %d workers", n_replicas, workers)
    with ProcessPoolExecutor(max_workers=min(workers, n_replicas)) as pool:
        futures = [pool.submit(_run_one, fn, seed, i) for i in range(n_replicas)]
        return [f.result() for f in futures]
