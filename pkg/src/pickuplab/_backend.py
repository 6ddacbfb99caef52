"""Pick the kernel implementation at import time.

The compiled extension is used when it imports cleanly. Setting
``PICKUPLAB_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _kernels_py

kernels = _kernels_py
NAME = "python"

if os.environ.get("PICKUPLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        NAME = "cython"


def available():
    """Return the kernel modules importable in this environment, by name."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels as compiled
    except ImportError:
        return found
    found["cython"] = compiled
    return found
