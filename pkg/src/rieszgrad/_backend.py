"""Backend selection for the hot numeric kernels.

Kernels are compiled with numba unless ``RIESZGRAD_BACKEND=numpy`` is set in
the environment, in which case the pure numpy implementations are used. The
flag is read once at import time.

``RIESZGRAD_THREADS`` sets the default numba thread count.
"""
import os

# the bundled TBB is too old for numba's tbb layer; skip the probe and its warning
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

BACKEND_ENV = "RIESZGRAD_BACKEND"
THREADS_ENV = "RIESZGRAD_THREADS"

try:
    import numba
    from numba import prange
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    prange = range

_requested = os.environ.get(BACKEND_ENV, "numba").strip().lower()
USE_NUMBA = numba is not None and _requested not in ("numpy", "python", "0", "off")
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """numba.njit with caching; always compiles, regardless of the env flag.

    Used for the numba flavour of every kernel so that both flavours stay
    importable (the benchmark compares them side by side).
    """
    if numba is None:  # pragma: no cover
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return numba.njit(*args, **kwargs)


def set_threads(count=None):
    """Apply a thread count (or the ``RIESZGRAD_THREADS`` default) to numba."""
    if count is None:
        raw = os.environ.get(THREADS_ENV)
        if not raw:
            return None
        count = int(raw)
    if numba is not None:
        count = max(1, min(int(count), numba.config.NUMBA_NUM_THREADS))
        numba.set_num_threads(count)
    return count
