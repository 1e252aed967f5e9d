"""Pick the compiled kernels when available, else the numpy fallback.

Set ``TRISECT_PURE=1`` to force the fallback.
"""

import os

from . import _pykernels as pure

try:
    if os.environ.get("TRISECT_PURE"):
        raise ImportError("pure kernels requested")
    from . import _ckernels as compiled
except ImportError:
    compiled = None

active = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "python"

kernel_dims = active.kernel_dims
kernel_dims_many = active.kernel_dims_many
line_keys = active.line_keys
normal_spread = active.normal_spread
wedge_perm = active.wedge_perm
orbit_labels = active.orbit_labels
