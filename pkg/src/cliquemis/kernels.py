"""Backend selection for the hot loops.

The compiled extension is used when it imports; set ``CLIQUEMIS_PURE_PYTHON=1``
to force the pure-Python versions.
"""

from __future__ import annotations

import os

if os.environ.get("CLIQUEMIS_PURE_PYTHON"):
    from cliquemis._kernels_py import greedy_trace, residual_degrees

    BACKEND = "python"
else:
    try:
        from cliquemis._kernels import greedy_trace, residual_degrees

        BACKEND = "cython"
    except ImportError:
        from cliquemis._kernels_py import greedy_trace, residual_degrees

        BACKEND = "python"

__all__ = ["BACKEND", "greedy_trace", "residual_degrees"]
