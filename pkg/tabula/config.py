import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

import numpy as np

from .errors import UsageError

THREADS_ENV = "TABULA_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    """Number of worker threads, capped by the ``TABULA_THREADS`` environment variable."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return min(4, os.cpu_count() or 1)
    try:
        count = int(raw)
    except ValueError:
        raise UsageError(f"'{THREADS_ENV}' must be a positive integer, got '{raw}'") from None
    if count < 1:
        raise UsageError(f"'{THREADS_ENV}' must be a positive integer, got '{raw}'")
    return count


def ordered_map(func: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Applies ``func`` to every item, possibly in parallel, and returns the results in item order."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def make_rng(seed: int) -> np.random.Generator:
    """Seeded 64-bit PCG generator, the only source of randomness in the package."""
    return np.random.Generator(np.random.PCG64(seed))


def fresh_seed() -> int:
    """A seed drawn from OS entropy, for runs that were not given one (callers must record it)."""
    return int(np.random.SeedSequence().generate_state(1)[0])


def spawn_rngs(seed: int, count: int) -> List[np.random.Generator]:
    """Independent child generators, e.g. one per bagging member, so results don't depend on scheduling."""
    return [np.random.Generator(np.random.PCG64(child)) for child in np.random.SeedSequence(seed).spawn(count)]
