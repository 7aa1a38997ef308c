"""JIT switch.

Set ``GICWSR_DISABLE_JIT=1`` before import to run every kernel through its
pure-numpy path. Numba missing from the environment has the same effect.
"""
import os

_FLAG = os.environ.get("GICWSR_DISABLE_JIT", "").strip().lower()

try:
    import numba
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency
    numba = None
    HAS_NUMBA = False

USE_JIT = HAS_NUMBA and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAS_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)

    def deco(fn):
        return fn

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return deco


def backend():
    return "numba" if USE_JIT else "numpy"
