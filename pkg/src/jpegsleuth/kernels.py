"""Numba dispatch for the hot kernels.

Entropy coding and the one-hot dilated convolution dominate runtime, so
their inner loops are compiled with numba when available.  Setting the
environment variable ``JPEGSLEUTH_NO_NUMBA=1`` forces the pure
Python/NumPy fallback everywhere; ``benchmarks/bench_kernels.py``
compares the two paths.
"""

import os

NUMBA_ENV_FLAG = "JPEGSLEUTH_NO_NUMBA"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def numba_disabled_by_env() -> bool:
    return os.environ.get(NUMBA_ENV_FLAG, "").strip().lower() in ("1", "true", "yes")


USE_NUMBA = HAVE_NUMBA and not numba_disabled_by_env()


def jit(fn):
    """Compile ``fn`` unconditionally (used by benchmarks); None without numba."""
    if not HAVE_NUMBA:  # pragma: no cover
        return None
    return numba.njit(cache=True, nogil=True)(fn)


def accelerate(fn):
    """Compile ``fn`` on the active path, otherwise return it unchanged."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn
