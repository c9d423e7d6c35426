"""Select the kernel implementation at import time.

The compiled extension is preferred.  Setting the environment variable
``BETAFRECHET_PURE_PYTHON`` to a non-empty value forces the pure-Python
kernels, which is how the backend-equivalence tests and the benchmark
exercise both paths in one process.
"""

import importlib
import os

from . import _kernels_py


def load_kernels(prefer_compiled=None):
    """Return the kernel module to use.

    Parameters
    ----------
    prefer_compiled : bool, optional
        Override the environment variable.  ``None`` consults it.
    """
    if prefer_compiled is None:
        prefer_compiled = not os.environ.get("BETAFRECHET_PURE_PYTHON")
    if prefer_compiled:
        try:
            return importlib.import_module("betafrechet._kernels")
        except ImportError:
            pass
    return _kernels_py


def compiled_kernels():
    """The compiled kernel module, or ``None`` when it is not built."""
    try:
        return importlib.import_module("betafrechet._kernels")
    except ImportError:
        return None


kernels = load_kernels()
BACKEND = kernels.BACKEND
