"""Select the Chernoff kernel implementation at import time.

The compiled extension is preferred when present; the numpy fallback is
selected otherwise.  Set GDSTRENGTH_BACKEND=python (or =compiled) to force
a choice, e.g. for benchmarking.
"""

import os

_requested = os.environ.get("GDSTRENGTH_BACKEND", "").strip().lower()

if _requested in ("python", "py"):
    from . import _kernels_py as kernels

    BACKEND = "python"
elif _requested in ("compiled", "c", "cython"):
    from . import _kernels as kernels

    BACKEND = "compiled"
elif _requested:
    raise ImportError(f"unknown GDSTRENGTH_BACKEND value {_requested!r}")
else:
    try:
        from . import _kernels as kernels

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as kernels

        BACKEND = "python"
