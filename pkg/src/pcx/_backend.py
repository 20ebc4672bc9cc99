"""Kernel backend selection.

The grid-search kernels exist in two versions: a numba ``@njit`` build and a
pure-numpy build. ``PCX_BACKEND=numpy`` forces the fallback; ``PCX_BACKEND=numba``
forces JIT (raising if numba is unavailable). Unset, numba is used when it
imports cleanly. The flag is read on every dispatch so tests and benchmarks can
flip it without reloading the package.
"""

import os

_NUMBA_OK: bool | None = None


def numba_available() -> bool:
    global _NUMBA_OK
    if _NUMBA_OK is None:
        try:
            import numba  # noqa: F401

            _NUMBA_OK = True
        except ImportError:
            _NUMBA_OK = False
    return _NUMBA_OK


def active_backend() -> str:
    """Return ``"numba"`` or ``"numpy"`` for the current process environment."""
    choice = os.environ.get("PCX_BACKEND", "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not numba_available():
            raise RuntimeError("PCX_BACKEND=numba but numba is not importable")
        return "numba"
    if choice not in ("", "auto"):
        raise RuntimeError(f"unknown PCX_BACKEND value: {choice!r} (use numba, numpy or auto)")
    return "numba" if numba_available() else "numpy"
