"""Backend selection for the hot lattice sums.

The compiled extension is used when importable; otherwise the numpy fallback.
``FRACLAB_KERNELS=python`` forces the fallback, ``FRACLAB_THREADS`` caps the
OpenMP thread count of the compiled kernels.
"""

import logging
import os

from . import _kernels_py

log = logging.getLogger(__name__)

_compiled = None
if os.environ.get("FRACLAB_KERNELS", "").lower() != "python":
    try:
        from . import _kernels as _compiled
    except ImportError:  # pragma: no cover - depends on the build
        log.info("compiled kernels unavailable, using numpy fallback")
        _compiled = None

HAVE_COMPILED = _compiled is not None
_active = _compiled if HAVE_COMPILED else _kernels_py


def backend_name():
    return "compiled" if _active is _compiled and HAVE_COMPILED else "python"


def use_backend(name):
    """Switch between ``"compiled"`` and ``"python"`` kernels at runtime."""
    global _active
    if name == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    elif name == "python":
        _active = _kernels_py
    else:
        raise ValueError(f"unknown kernel backend '{name}'")


def thread_count():
    raw = os.environ.get("FRACLAB_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"FRACLAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"FRACLAB_THREADS must be a positive integer, got {raw!r}")
    return n


def pair_sum(f, w, parity):
    fn = _active.pair_sum_1d if f.ndim == 1 else _active.pair_sum_2d
    return fn(f, w, int(parity), thread_count())


def absdiff_sum(f, w, p=1.0):
    fn = _active.absdiff_sum_1d if f.ndim == 1 else _active.absdiff_sum_2d
    return fn(f, w, float(p), thread_count())


def absdiff_max(f, w):
    fn = _active.absdiff_max_1d if f.ndim == 1 else _active.absdiff_max_2d
    return fn(f, w, thread_count())
