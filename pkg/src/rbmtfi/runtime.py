"""Worker-pool sizing shared by the samplers and the CLI."""

from __future__ import annotations

import os

ENV_THREADS = "RBMTFI_THREADS"


def worker_count(threads: int | None = None) -> int:
    """Resolve the thread count: explicit argument, then the RBMTFI_THREADS
    environment variable, then hardware parallelism."""
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(ENV_THREADS)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1
