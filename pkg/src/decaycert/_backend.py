"""Backend selection for the grid kernels.

Two interchangeable implementations exist: a numba-jitted one and a
pure-numpy one.  ``DECAYCERT_BACKEND`` picks between them:

* ``auto`` (default) -- numba when importable, else numpy;
* ``numba``          -- require numba, fail loudly if missing;
* ``numpy``          -- force the pure-numpy path.

``DECAYCERT_THREADS`` caps the jitted kernels' thread count (default:
machine cores).  The numpy path is single-threaded at the Python level;
BLAS threading inside LAPACK calls is unaffected.
"""

import os

from .errors import InvalidParams

BACKEND_ENV = "DECAYCERT_BACKEND"
THREADS_ENV = "DECAYCERT_THREADS"

try:
    import numba

    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False

_kernels_cache = {}


def requested_backend() -> str:
    value = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if value not in ("auto", "numba", "numpy"):
        raise InvalidParams(
            f"{BACKEND_ENV} must be one of auto/numba/numpy, got {value!r}"
        )
    return value


def active_backend() -> str:
    """The backend that would serve the next kernel call."""
    value = requested_backend()
    if value == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if value == "numba" and not HAS_NUMBA:
        raise InvalidParams("DECAYCERT_BACKEND=numba but numba is not importable")
    return value


def _apply_thread_cap():
    raw = os.environ.get(THREADS_ENV)
    if raw is None or not HAS_NUMBA:
        return
    try:
        requested = int(raw)
    except ValueError as exc:
        raise InvalidParams(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if requested < 1:
        raise InvalidParams(f"{THREADS_ENV} must be >= 1, got {requested}")
    numba.set_num_threads(min(requested, numba.config.NUMBA_NUM_THREADS))


def kernels():
    """The kernel module for the active backend (imported lazily)."""
    name = active_backend()
    mod = _kernels_cache.get(name)
    if mod is None:
        if name == "numba":
            _apply_thread_cap()
            from . import _kernels_numba as mod
        else:
            from . import _kernels_numpy as mod
        _kernels_cache[name] = mod
    elif name == "numba":
        _apply_thread_cap()
    return mod
