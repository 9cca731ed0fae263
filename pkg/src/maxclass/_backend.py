"""Select the compiled kernels when available, else the numpy fallback.

Set ``MAXCLASS_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

python_kernels = _pykernels
compiled_kernels = None

if os.environ.get("MAXCLASS_PURE_PYTHON", "") not in ("", "0"):
    kernels = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as compiled_kernels
    except ImportError:
        kernels = _pykernels
        BACKEND = "python"
    else:
        kernels = compiled_kernels
        BACKEND = "cython"
