"""Kernel selection: the compiled extension when importable, numpy otherwise.

Set ``COTSUM_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _fallback

kernels = _fallback
BACKEND = "python"

if os.environ.get("COTSUM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as kernels  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

_threads = 1


def set_threads(n: int) -> None:
    global _threads
    if n < 1:
        raise ValueError("threads must be >= 1")
    _threads = int(n)


def threads() -> int:
    return _threads
