"""Kernel backend selection.

Two implementations of the mod-ell array kernels exist: a numba-compiled
fast path and a pure-numpy fallback. The active one is chosen by the
ETAQ_BACKEND environment variable ("numba", "numpy", or "auto"), and can
be switched at runtime with set_backend(). "auto" prefers numba when it
imports cleanly.
"""
from __future__ import annotations

import os

_VALID = ("auto", "numba", "numpy")

_requested = os.environ.get("ETAQ_BACKEND", "auto").strip().lower() or "auto"
_active: str | None = None


def set_backend(name: str) -> None:
    """Select the kernel backend for subsequent calls."""
    global _requested, _active
    name = name.strip().lower()
    if name not in _VALID:
        raise ValueError(f"unknown backend {name!r}; expected one of {_VALID}")
    _requested = name
    _active = None


def requested_backend() -> str:
    """The backend as requested ("auto", "numba", or "numpy"), before resolution."""
    return _requested


def _numba_importable() -> bool:
    try:
        import numba  # noqa: F401
    except Exception:
        return False
    return True


def active_backend() -> str:
    """Resolve and return the backend actually in use: "numba" or "numpy"."""
    global _active
    if _active is None:
        if _requested == "numpy":
            _active = "numpy"
        elif _requested == "numba":
            if not _numba_importable():
                raise RuntimeError("ETAQ_BACKEND=numba but numba is not importable")
            _active = "numba"
        else:
            _active = "numba" if _numba_importable() else "numpy"
    return _active
