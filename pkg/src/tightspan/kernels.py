"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python twin in ``_kernels_py``.  Setting ``TIGHTSPAN_PURE=1`` forces
the pure backend.
"""
import os

from . import _kernels_py as pure

compiled = None
if os.environ.get("TIGHTSPAN_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled
    except ImportError:
        compiled = None

backend = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "python"

descent = backend.descent
bnb_min_makespan = backend.bnb_min_makespan
bnb_exists = backend.bnb_exists
