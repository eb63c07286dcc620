"""Hot-kernel backend selection.

Imports the compiled Cython extension when available, otherwise the NumPy
fallback.  CUSPFORGE_PURE=1 forces the fallback (useful for benchmarking and
for debugging suspected kernel discrepancies).
"""

import os

if os.environ.get("CUSPFORGE_PURE") == "1":
    from . import _pure as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as _impl

BACKEND = _impl.BACKEND
lobachevsky = _impl.lobachevsky
neg_log_2sin = _impl.neg_log_2sin
volume_half_sum = _impl.volume_half_sum

__all__ = ["BACKEND", "lobachevsky", "neg_log_2sin", "volume_half_sum"]
