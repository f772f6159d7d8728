"""Optional numba acceleration.

Set ``MULTISCHMIDT_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The
flag is read once at import time.
"""
import os

_DISABLED = os.environ.get("MULTISCHMIDT_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on")

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise the identity decorator.

    Kernels decorated here are always compiled if numba exists, so the
    benchmark can compare both paths regardless of the env flag.
    """
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)

    def deco(fn):
        return fn
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return deco
