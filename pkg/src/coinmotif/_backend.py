"""Backend selection for the numeric kernels.

``COINMOTIF_BACKEND=numpy`` (or ``COINMOTIF_DISABLE_NUMBA=1``) selects the
pure-numpy path at import time. :func:`set_backend` switches at runtime, which
the benchmark uses to time both paths in one process.
"""

import os
import warnings

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

BACKENDS = ("numba", "numpy")


def _initial_backend():
    if numba is None:
        return "numpy"
    if os.environ.get("COINMOTIF_DISABLE_NUMBA", "0").lower() not in ("", "0", "false", "no"):
        return "numpy"
    name = os.environ.get("COINMOTIF_BACKEND", "numba").strip().lower()
    if name not in BACKENDS:
        warnings.warn(f"unknown COINMOTIF_BACKEND={name!r}, using numba", RuntimeWarning)
        return "numba"
    return name


_current = _initial_backend()


def available_backends():
    return BACKENDS if numba is not None else ("numpy",)


def get_backend():
    return _current


def set_backend(name):
    """Select ``"numba"`` or ``"numpy"`` kernels; returns the previous backend."""
    global _current
    if name not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and numba is None:  # pragma: no cover
        raise RuntimeError("numba is not installed")
    previous, _current = _current, name
    return previous


def njit(fn):
    """``numba.njit(cache=True, nogil=True)``, or identity when numba is missing."""
    if numba is None:  # pragma: no cover
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
