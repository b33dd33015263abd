"""Pick the kernel implementation at import time.

The compiled extension is preferred; set ``QHE_PURE_PYTHON=1`` to force the
pure-Python fallback (used by the equivalence tests and the benchmark).
"""
import os

from . import _kernels_py

NAME = "python"
kernels = _kernels_py

if os.environ.get("QHE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        NAME = "cython"
    except ImportError:
        pass

FOUND = _kernels_py.FOUND
NOT_FOUND = _kernels_py.NOT_FOUND
MULTIPLE_ROOTS = _kernels_py.MULTIPLE_ROOTS
