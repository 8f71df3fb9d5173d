"""Deterministic fan-out helper: chunked work, results merged in chunk order."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def run_chunked(worker, chunk_args, threads=1):
    """Apply ``worker`` to each argument tuple; order of results is the order
    of ``chunk_args`` regardless of the worker count."""
    chunk_args = list(chunk_args)
    if threads <= 1 or len(chunk_args) <= 1:
        return [worker(*args) for args in chunk_args]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(worker, *args) for args in chunk_args]
        return [f.result() for f in futures]


def split_range(lo, hi, parts):
    """Split [lo, hi) into at most ``parts`` contiguous [a, b) pieces."""
    total = hi - lo
    if total <= 0:
        return []
    parts = max(1, min(parts, total))
    step = -(-total // parts)
    return [(a, min(a + step, hi)) for a in range(lo, hi, step)]
