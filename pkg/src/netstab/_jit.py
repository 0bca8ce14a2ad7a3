"""JIT switch for the numeric kernels.

Kernels are written once as plain Python over numpy arrays and compiled with
``numba.njit`` when numba is importable.  Setting ``NETSTAB_DISABLE_JIT=1``
(read once, at import time) keeps the plain-Python versions, which is useful
for debugging and for the benchmark's baseline run.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

DISABLE_JIT = os.environ.get("NETSTAB_DISABLE_JIT", "").strip().lower() not in ("", "0", "false", "no")
USING_NUMBA = numba is not None and not DISABLE_JIT


def jit(fn):
    """Compile ``fn`` in nopython mode, or return it untouched in fallback mode."""
    if USING_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def python_impl(fn):
    """Return the uncompiled Python function behind a kernel."""
    return getattr(fn, "py_func", fn)
