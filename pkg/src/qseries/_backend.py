"""Pick the kernel implementation at import time.

The compiled extension is used when it was built; ``QSERIES_PURE_PYTHON=1``
forces the reference kernels regardless.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("QSERIES_PURE_PYTHON") == "1":
    kernels = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        kernels = _pykernels
        BACKEND = "python"
    else:
        BACKEND = "cython"

__all__ = ["BACKEND", "kernels"]
