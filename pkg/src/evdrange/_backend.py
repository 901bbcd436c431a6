"""Select the sweep kernels: compiled extension if available, else pure Python.

Set ``EVDRANGE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _fallback

_impl = None
if not os.environ.get("EVDRANGE_PURE_PYTHON"):
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = None

if _impl is None:
    _impl = _fallback
    BACKEND = "python"
else:
    BACKEND = "compiled"

# the compiled fixed kernel keeps accumulators in int64
MAX_COMPILED_ACC_BITS = 62

float_evd = _impl.float_evd


def fixed_evd(A_raw, wl, iwl, sweeps, strict, guard_bits):
    if _impl is not _fallback and wl + iwl + guard_bits <= MAX_COMPILED_ACC_BITS:
        return _impl.fixed_evd(A_raw, wl, iwl, sweeps, strict, guard_bits)
    return _fallback.fixed_evd(A_raw, wl, iwl, sweeps, strict, guard_bits)
