from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evdrange import (FixedFormat, FixedOverflow, FixedScalar, OverflowLog, fixed_jacobi_evd,
                      jacobi_evd, parse_format, random_spsd, scale_matrix)
from evdrange.errors import DivideByZero, NegativeSqrt
from evdrange.fixedpoint import (events_to_csv, fx_add, fx_div, fx_mul, fx_quantize, fx_sqrt,
                                 fx_sub)


def oracle(value: Fraction, fmt: FixedFormat) -> int:
    """Round-half-even to the format grid, then saturate (pure rationals)."""
    raw = round(value * (1 << fmt.fraction_bits))
    return max(fmt.raw_min, min(fmt.raw_max, raw))


formats = st.builds(lambda wl, i: FixedFormat(wl, min(i, wl)),
                    st.integers(4, 64), st.integers(1, 8))


@st.composite
def scalar_pairs(draw):
    fmt = draw(formats)
    raws = st.integers(fmt.raw_min, fmt.raw_max)
    return FixedScalar(draw(raws), fmt), FixedScalar(draw(raws), fmt)


def _frac(s: FixedScalar) -> Fraction:
    return Fraction(s.raw, 1 << s.format.fraction_bits)


def test_format_properties():
    f = FixedFormat(8, 2)
    assert f.fraction_bits == 6
    assert (f.raw_min, f.raw_max) == (-128, 127)
    assert f.max_value == pytest.approx(127 / 64)
    assert str(f) == "8:2"


@pytest.mark.parametrize("text", ["8", "8:0", "2:3", "65:2", "a:b"])
def test_parse_format_rejects(text):
    with pytest.raises(ValueError):
        parse_format(text)


def test_parse_format_round_trip():
    assert parse_format(" 32:2 ") == FixedFormat(32, 2)


def test_quantize_ties_to_even():
    f = FixedFormat(8, 2)
    assert fx_quantize(1.5 / 64, f).raw == 2
    assert fx_quantize(2.5 / 64, f).raw == 2
    assert fx_quantize(-2.5 / 64, f).raw == -2


def test_quantize_saturates_and_logs():
    log = OverflowLog()
    s = fx_quantize(5.0, FixedFormat(8, 2), log)
    assert s.raw == 127
    (ev,) = log.events
    assert ev.operation == "quantize" and ev.ideal_value == 5.0
    assert ev.stored_value == pytest.approx(127 / 64)


def test_strict_log_raises():
    with pytest.raises(FixedOverflow):
        fx_quantize(-9.0, FixedFormat(8, 2), OverflowLog(strict=True))


def test_division_by_zero_and_negative_sqrt():
    f = FixedFormat(16, 4)
    with pytest.raises(DivideByZero):
        fx_div(fx_quantize(1.0, f), fx_quantize(0.0, f))
    with pytest.raises(NegativeSqrt):
        fx_sqrt(fx_quantize(-1.0, f))


def test_events_csv_columns():
    log = OverflowLog()
    fx_quantize(9.0, FixedFormat(8, 2), log)
    head = events_to_csv(log.events).splitlines()[0]
    assert head == "sweep,i,j,variable,operation,ideal_value,stored_value"


@given(scalar_pairs())
@settings(max_examples=400, deadline=None)
def test_add_sub_mul_match_rational_oracle(pair):
    x, y = pair
    fmt = x.format
    assert fx_add(x, y).raw == oracle(_frac(x) + _frac(y), fmt)
    assert fx_sub(x, y).raw == oracle(_frac(x) - _frac(y), fmt)
    assert fx_mul(x, y).raw == oracle(_frac(x) * _frac(y), fmt)


@given(scalar_pairs())
@settings(max_examples=400, deadline=None)
def test_div_matches_rational_oracle(pair):
    x, y = pair
    if y.raw == 0:
        return
    assert fx_div(x, y).raw == oracle(_frac(x) / _frac(y), x.format)


@given(scalar_pairs())
@settings(max_examples=300, deadline=None)
def test_sqrt_is_nearest(pair):
    x, _ = pair
    if x.raw < 0:
        return
    r = fx_sqrt(x)
    ulp = Fraction(1, 1 << x.format.fraction_bits)
    exact = _frac(x)
    got = _frac(r)
    # nearest grid point: its square is closer than either neighbour's
    if r.raw < x.format.raw_max:
        assert abs(got ** 2 - exact) <= abs((got + ulp) ** 2 - exact)
    if r.raw > 0:
        assert abs(got ** 2 - exact) <= abs((got - ulp) ** 2 - exact)


@given(formats, st.floats(-300, 300, allow_nan=False))
@settings(max_examples=400, deadline=None)
def test_quantize_matches_oracle_and_logs_iff_saturated(fmt, x):
    log = OverflowLog()
    s = fx_quantize(x, fmt, log)
    assert s.raw == oracle(Fraction(x), fmt)
    unclamped = round(Fraction(x) * (1 << fmt.fraction_bits))
    assert bool(log.events) == (not fmt.raw_min <= unclamped <= fmt.raw_max)


# --- whole-run behaviour ----------------------------------------------------

def test_wide_format_tracks_double_precision():
    M = scale_matrix(random_spsd(6, 11)).scaled
    ref = np.sort(jacobi_evd(M).eigenvalues)
    got = np.sort(fixed_jacobi_evd(M, FixedFormat(50, 2)).eigenvalues)
    np.testing.assert_allclose(got, ref, rtol=1e-9, atol=1e-12)


def test_wide_format_uses_arbitrary_precision_path():
    M = scale_matrix(random_spsd(4, 5)).scaled
    ref = np.sort(jacobi_evd(M).eigenvalues)
    got = np.sort(fixed_jacobi_evd(M, FixedFormat(64, 4)).eigenvalues)
    np.testing.assert_allclose(got, ref, rtol=1e-12)


def test_unscaled_input_overflows_narrow_format(mat_d):
    res = fixed_jacobi_evd(mat_d, FixedFormat(16, 2))
    assert res.overflow_events
    first = res.overflow_events[0]
    assert (first.operation, first.variable, first.sweep) == ("quantize", "A", -1)


def test_strict_overflow_raises_with_location(mat_d):
    with pytest.raises(FixedOverflow) as info:
        fixed_jacobi_evd(mat_d, FixedFormat(16, 2), strict=True)
    assert info.value.event.variable == "A"


def test_store_overflow_is_tagged_with_variable():
    # entries in range but eigenvalues beyond the 2-bit integer part
    M = [[1.5, 1.5], [1.5, 1.5]]
    res = fixed_jacobi_evd(M, FixedFormat(16, 2))
    tags = {ev.variable for ev in res.overflow_events}
    assert "A" in tags
    assert all(ev.sweep >= 0 for ev in res.overflow_events)


@given(st.integers(0, 10_000), st.integers(2, 8), st.sampled_from([8, 12, 16, 24, 32]))
@settings(max_examples=120, deadline=None)
def test_scaled_inputs_never_overflow(seed, n, wl):
    M = scale_matrix(random_spsd(n, seed)).scaled
    assert fixed_jacobi_evd(M, FixedFormat(wl, 2)).overflow_events == ()


@given(st.integers(0, 10_000), st.integers(2, 8))
@settings(max_examples=60, deadline=None)
def test_fixed_eigenvalues_within_format_error(seed, n):
    M = scale_matrix(random_spsd(n, seed)).scaled
    ref = np.sort(jacobi_evd(M).eigenvalues)
    got = np.sort(fixed_jacobi_evd(M, FixedFormat(32, 2)).eigenvalues)
    assert np.max(np.abs(got - ref)) < 1e-6
