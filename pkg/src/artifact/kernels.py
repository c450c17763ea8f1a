"""Kernel selection: the compiled extension when built, else the numpy fallback.

Set ARTIFACT_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("ARTIFACT_PURE_PYTHON") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

arg_grad4 = _impl.arg_grad4
eta_grad = _impl.eta_grad
