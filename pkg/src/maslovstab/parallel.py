"""Worker-count policy: MASLOV_STAB_THREADS caps any parallel map."""

import os


def worker_count(requested=None):
    """Effective worker count after applying the environment cap."""
    if requested is None:
        requested = os.cpu_count() or 1
    cap = os.environ.get("MASLOV_STAB_THREADS")
    if cap is not None:
        try:
            requested = min(requested, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, requested)
