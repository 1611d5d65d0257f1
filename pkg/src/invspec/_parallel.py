import os


def worker_count(default=None):
    """Number of worker threads allowed, capped by ``INVSPEC_THREADS``."""
    cap = os.environ.get("INVSPEC_THREADS")
    n = default if default is not None else (os.cpu_count() or 1)
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, n)
