import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from evdrange import Interval
from evdrange.intervals import IntervalOps, hull

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@st.composite
def intervals(draw):
    a, b = draw(finite), draw(finite)
    return Interval(min(a, b), max(a, b))


def _members(iv):
    return [iv.lo, iv.hi, iv.lo + (iv.hi - iv.lo) / 3]


def test_point_arithmetic_is_exact_when_representable():
    assert Interval.point(0.5) + Interval.point(0.25) == Interval(0.75, 0.75)
    assert Interval.point(3.0) * Interval.point(2.0) == Interval(6.0, 6.0)


def test_inexact_sum_is_widened():
    s = Interval.point(0.1) + Interval.point(0.2)
    exact = Fraction(0.1) + Fraction(0.2)
    assert Fraction(s.lo) <= exact <= Fraction(s.hi)
    assert s.lo < s.hi


def test_division_by_interval_containing_zero_is_entire():
    assert Interval(1, 2) / Interval(-1, 1) == Interval.entire()


def test_sqrt_drops_negative_part():
    assert Interval(-4, 4).sqrt() == Interval(0, 2)


def test_sign_convention():
    assert Interval(0, 0).sign() == Interval(1, 1)
    assert Interval(-1, 2).sign() == Interval(-1, 1)


def test_empty_and_nan_rejected():
    with pytest.raises(ValueError):
        Interval(2, 1)
    with pytest.raises(ValueError):
        Interval(math.nan, 1)


def test_clip_disjoint_collapses_to_edge():
    assert Interval(2, 3).clip(-1, 1) == Interval(1, 1)
    assert Interval(-5, -3).clip(0, 1) == Interval(0, 0)


def test_str_renders_infinities():
    assert str(Interval.entire()) == "[-inf, +inf]"
    assert hull([3, -1, 2]) == Interval(-1, 3)


def test_ops_hypot_encloses():
    ops = IntervalOps()
    h = ops.hypot(Interval(3, 3), Interval(4, 4))
    assert 5.0 in h


# containment against exact rational arithmetic
@given(intervals(), intervals())
@settings(max_examples=300, deadline=None)
def test_add_sub_mul_contain_exact_results(x, y):
    for a in _members(x):
        for b in _members(y):
            fa, fb = Fraction(a), Fraction(b)
            s, d, p = x + y, x - y, x * y
            assert Fraction(s.lo) <= fa + fb <= Fraction(s.hi)
            assert Fraction(d.lo) <= fa - fb <= Fraction(d.hi)
            assert Fraction(p.lo) <= fa * fb <= Fraction(p.hi)


@given(intervals(), intervals())
@settings(max_examples=300, deadline=None)
def test_div_contains_exact_quotient(x, y):
    q = x / y
    for a in _members(x):
        for b in _members(y):
            if b == 0:
                continue
            exact = Fraction(a) / Fraction(b)
            assert q.lo == -math.inf or Fraction(q.lo) <= exact
            assert q.hi == math.inf or exact <= Fraction(q.hi)


@given(st.floats(0, 1e12, allow_nan=False))
@settings(max_examples=300, deadline=None)
def test_sqrt_brackets_true_root(v):
    r = Interval.point(v).sqrt()
    assert Fraction(r.lo) ** 2 <= Fraction(v) <= Fraction(r.hi) ** 2


@given(intervals())
@settings(max_examples=200, deadline=None)
def test_sqr_is_nonnegative_and_tighter_than_product(x):
    s = x.sqr()
    assert s.lo >= 0
    assert (x * x).contains(s)
    for a in _members(x):
        assert Fraction(s.lo) <= Fraction(a) ** 2 <= Fraction(s.hi)
