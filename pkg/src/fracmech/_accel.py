"""
Optional numba acceleration.

Set ``FRACMECH_DISABLE_NUMBA=1`` to force the pure-numpy kernels (also used
automatically when numba is not importable). ``FRACMECH_NUM_THREADS`` caps the
number of threads used by parallel kernels.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

# TBB in this environment is too old for numba; OpenMP is thread-safe too
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

try:
    from numba import njit, prange
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False
    numba = None
    prange = range

    def njit(*args, **kw):
        if len(args) == 1 and callable(args[0]) and not kw:
            return args[0]
        return lambda f: f


def numba_requested() -> bool:
    return os.environ.get("FRACMECH_DISABLE_NUMBA", "").strip().lower() in _FALSY


USE_NUMBA = HAVE_NUMBA and numba_requested()


def apply_thread_cap() -> None:
    cap = os.environ.get("FRACMECH_NUM_THREADS")
    if not cap or not USE_NUMBA:
        return
    n = int(cap)
    if n < 1:
        raise ValueError(f"FRACMECH_NUM_THREADS must be >= 1, got {cap!r}")
    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


apply_thread_cap()
