"""The compiled kernels and the pure-Python fallback must agree bit for bit."""
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evdrange import _backend, _fallback, random_spsd, scale_matrix
from evdrange.fixedpoint import GUARD_BITS, fx_quantize, FixedFormat

kernels = pytest.importorskip("evdrange._kernels")


def test_compiled_backend_selected():
    assert _backend.BACKEND == "compiled"


def test_env_var_forces_fallback():
    env = dict(os.environ, EVDRANGE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import evdrange; print(evdrange.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@given(st.integers(0, 100_000), st.integers(2, 9), st.booleans())
@settings(max_examples=80, deadline=None)
def test_float_kernels_identical(seed, n, track):
    A = random_spsd(n, seed).entries
    a = kernels.float_evd(np.array(A), n, track, 0.0)
    b = _fallback.float_evd(np.array(A), n, track, 0.0)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1]) and a[2] == b[2]
    if track:
        assert np.array_equal(a[3], b[3])


def _raw(M, fmt):
    n = M.n
    out = np.zeros((n, n), dtype=np.int64)
    for k in range(n):
        for l in range(n):
            out[k, l] = fx_quantize(float(M.entries[k, l]), fmt).raw
    return out


@given(st.integers(0, 100_000), st.integers(2, 7),
       st.sampled_from([(8, 2), (12, 2), (16, 3), (24, 2), (32, 2), (40, 4)]),
       st.booleans())
@settings(max_examples=80, deadline=None)
def test_fixed_kernels_identical(seed, n, wl_iwl, unscaled):
    wl, iwl = wl_iwl
    M = random_spsd(n, seed)
    if not unscaled:
        M = scale_matrix(M).scaled
    raw = _raw(M, FixedFormat(wl, iwl))
    a = kernels.fixed_evd(raw.copy(), wl, iwl, n, False, GUARD_BITS)
    b = _fallback.fixed_evd(raw.copy(), wl, iwl, n, False, GUARD_BITS)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    assert list(a[2]) == list(b[2])


def test_fixed_strict_stops_at_first_event(mat_d):
    fmt = FixedFormat(16, 6)
    raw = _raw(mat_d, fmt)
    a = kernels.fixed_evd(raw.copy(), 16, 6, 2, True, GUARD_BITS)
    b = _fallback.fixed_evd(raw.copy(), 16, 6, 2, True, GUARD_BITS)
    assert len(a[2]) == len(b[2]) <= 1
    assert list(a[2]) == list(b[2])
