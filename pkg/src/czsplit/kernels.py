"""Kernel backend selection.

The compiled module is used when it imports and the field carries the
tables it needs; otherwise the pure-Python kernels run.  Setting
``CZSPLIT_PURE_PYTHON=1`` forces the fallback everywhere.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

FORCE_PURE = os.environ.get("CZSPLIT_PURE_PYTHON", "") not in ("", "0")


def compiled_available() -> bool:
    return _compiled is not None


def backend_name() -> str:
    return "python" if FORCE_PURE or _compiled is None else _compiled.BACKEND


def make_kernel(fld, backend: str | None = None):
    """Kernel object for ``fld``; ``backend`` is "cython", "python" or None (auto)."""
    want = backend or ("python" if FORCE_PURE else "auto")
    if want != "python" and _compiled is not None:
        t = fld.tables
        if t is not None and t.kind in (0, 1, 2):
            return _compiled.Kernel(fld)
    if want == "cython":
        raise RuntimeError("compiled kernels unavailable for this field or not built")
    return _kernels_py.Kernel(fld)
