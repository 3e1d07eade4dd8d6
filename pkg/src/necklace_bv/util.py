"""Small shared helpers: deterministic parallel map, sparse accumulation."""

import os
from concurrent.futures import ThreadPoolExecutor


def thread_cap():
    raw = os.environ.get("NECKLACE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Map ``fn`` over ``items``; results come back in input order whatever the thread cap."""
    items = list(items)
    n = thread_cap()
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def acc(d, key, c):
    """Add ``c`` to ``d[key]``, dropping the key when it cancels."""
    if not c:
        return
    v = d.get(key, 0) + c
    if v:
        d[key] = v
    else:
        del d[key]
