"""Optional numba acceleration for the hot kernels.

Every kernel in :mod:`flagcat.kernels` is written in the numba-compatible
subset of Python.  When numba is importable (and not disabled) the kernels are
compiled with ``numba.njit``; otherwise the very same source runs as plain
Python/numpy.  Set ``FLAGCAT_NO_NUMBA=1`` to force the fallback path.
"""
import os

ENV_FLAG = "FLAGCAT_NO_NUMBA"

_disabled = os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _disabled:
        raise ImportError("numba disabled via " + ENV_FLAG)
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def jit(fn):
    """Compile ``fn`` with numba when available, else return it untouched."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


def python_impl(fn):
    """The uncompiled Python function behind a (possibly) jitted kernel."""
    return getattr(fn, "py_func", fn)
