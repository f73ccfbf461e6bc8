"""Kernel backend selection.

The compiled extension is optional: if it is missing (no compiler at install
time) or disabled via LATTICESET_PURE_PYTHON=1, the pure-Python kernels take
over with identical results.  Everything downstream imports the chosen
module from here and never touches `_speedups` or `_pykernels` directly.
"""

from __future__ import annotations

import os
import warnings

from . import _pykernels

if os.environ.get("LATTICESET_PURE_PYTHON"):
    kernels = _pykernels
else:
    try:
        from . import _speedups as kernels  # type: ignore[no-redef]
    except ImportError:
        warnings.warn(
            "compiled kernels unavailable, falling back to pure Python "
            "(set LATTICESET_PURE_PYTHON=1 to silence this)",
            RuntimeWarning,
            stacklevel=2,
        )
        kernels = _pykernels

BACKEND = kernels.BACKEND_NAME

det_int = kernels.det_int
rank_int = kernels.rank_int
surface_scan = kernels.surface_scan
anchor_scan = kernels.anchor_scan
count_low_rank_subsets = kernels.count_low_rank_subsets
trace_closure_count = kernels.trace_closure_count
