"""
Lightweight logging helpers shared across apps.

We keep this in apps.core so any service or task can `from
apps.core.logging_utils import ...` without dragging in heavyweight deps. The
memory helper uses stdlib `resource` (no psutil in requirements/base.txt).

Intended usage at the entry/exit of long-running sweeps and certificates:

    timer = RunTimer()
    logger.info("kp sweep started: %s", memory_summary())
    ...
    logger.info("kp sweep finished: %s", timer.summary())
"""

import platform
import resource
import time


def current_rss_mb() -> float:
    """Return peak process RSS (resident set size) in megabytes.

    `ru_maxrss` is reported in kilobytes on Linux and in bytes on macOS.
    Returns 0.0 if the platform doesn't support rusage.
    """
    try:
        ru_maxrss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    except (OSError, ValueError):
        return 0.0

    if platform.system() == "Darwin":
        # macOS reports bytes
        return ru_maxrss / (1024 * 1024)
    return ru_maxrss / 1024


def memory_summary() -> str:
    """Compact one-liner suitable for embedding in a logger.info() call.

    Example output: "memory: rss=143.2 MB"
    """
    return f"memory: rss={current_rss_mb():.1f} MB"


class RunTimer:
    """Wall-clock stopwatch started at construction."""

    def __init__(self):
        self.started = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.started

    def summary(self) -> str:
        """Example output: "elapsed=1.84s memory: rss=143.2 MB" """
        return f"elapsed={self.elapsed:.2f}s {memory_summary()}"
