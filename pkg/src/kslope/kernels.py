"""Backend selection for the per-node kernels.

The compiled extension is used when it was built; set ``KSLOPE_PURE_PYTHON=1``
to force the numpy fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
weighted_log_norm = _pykernels.weighted_log_norm

if os.environ.get("KSLOPE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        weighted_log_norm = _ckernels.weighted_log_norm
        BACKEND = "cython"

BACKENDS = {"python": _pykernels.weighted_log_norm}
try:
    from . import _ckernels as _c

    BACKENDS["cython"] = _c.weighted_log_norm
except ImportError:
    pass
