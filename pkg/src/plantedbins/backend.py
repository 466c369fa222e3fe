"""Kernel backend selection.

The compiled Cython kernels are preferred when present; the pure numpy
kernels are the fallback.  Both produce bit-identical output, so backend
choice never changes results, only speed.  Set PLANTEDBINS_BACKEND=python
(or =cython) to force a backend.
"""

import os

from . import _kernels_py

try:
    from . import _kernels
except ImportError:
    _kernels = None


def _select():
    choice = os.environ.get("PLANTEDBINS_BACKEND", "auto").strip().lower()
    if choice in ("python", "py", "numpy"):
        return _kernels_py
    if choice in ("cython", "c", "compiled"):
        if _kernels is None:
            raise ImportError(
                "PLANTEDBINS_BACKEND=cython but the compiled kernels are not "
                "built; run: python setup.py build_ext --inplace"
            )
        return _kernels
    if choice not in ("auto", ""):
        raise ValueError(f"unknown PLANTEDBINS_BACKEND value: {choice!r}")
    return _kernels if _kernels is not None else _kernels_py


kernels = _select()


def backend_name():
    """Name of the active kernel backend ('cython' or 'python')."""
    return kernels.BACKEND_NAME


def available_backends():
    out = {"python": _kernels_py}
    if _kernels is not None:
        out["cython"] = _kernels
    return out
