"""Selects the compiled enumeration kernel when available.

Set ``CUBICZETA_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("CUBICZETA_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernel_py
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernel_py

IMPLEMENTATION = _impl.IMPLEMENTATION
scan_positive = _impl.scan_positive
scan_negative = _impl.scan_negative
reduced_state = _kernel_py.reduced_state
BOUNDARY = _kernel_py.BOUNDARY
INTERIOR = _kernel_py.INTERIOR

# int64 safety of the compiled loops (see _kernel.pyx)
MAX_CUTOFF = 10 ** 7


def implementations() -> dict:
    """Name -> module for every kernel importable in this environment."""
    impls = {"python": _kernel_py}
    try:
        from . import _kernel  # type: ignore[attr-defined]

        impls["cython"] = _kernel
    except ImportError:
        pass
    return impls
