import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from evdrange import AffineContext, AffineForm, Interval, aa_range, ia_range
from evdrange.affine import AffineOps

finite = st.floats(-100, 100, allow_nan=False)


@st.composite
def boxes(draw):
    a, b = draw(finite), draw(finite)
    return Interval(min(a, b), max(a, b))


def _sample(form: AffineForm, noise: dict) -> float:
    return form.center + sum(v * noise.get(k, 0.0) for k, v in form.deviations.items())


def test_correlated_subtraction_is_exact():
    ctx = AffineContext()
    x = ctx.from_interval(Interval(1.0, 3.0))
    d = ctx.sub(x, x).interval()
    assert d.width < 1e-12
    assert (Interval(1, 3) - Interval(1, 3)).width == 4.0


def test_sqr_of_straddling_form_is_nonnegative():
    ctx = AffineContext()
    x = ctx.from_interval(Interval(-1.0, 2.0))
    s = ctx.sqr(x).interval()
    assert s.lo >= -1e-12 and s.hi >= 4.0


def test_symbol_budget_is_enforced():
    ctx = AffineContext(max_symbols=4)
    forms = [ctx.from_interval(Interval(0, 1)) for _ in range(10)]
    total = forms[0]
    for f in forms[1:]:
        total = ctx.add(total, f)
    assert len(total.deviations) <= 4
    assert total.interval().contains(Interval(0, 10))


def test_division_by_form_around_zero_is_unbounded():
    ctx = AffineContext()
    y = ctx.from_interval(Interval(-1, 1))
    assert ctx.div(AffineForm.constant(1.0), y).is_unbounded()


def test_unbounded_times_exact_zero_is_zero():
    ctx = AffineContext()
    assert ctx.mul(AffineForm.unbounded(), AffineForm.constant(0.0)).interval() == Interval(0, 0)


@given(boxes(), boxes(), st.lists(st.floats(-1, 1), min_size=2, max_size=2))
@settings(max_examples=300, deadline=None)
def test_operations_enclose_sampled_values(bx, by, eps):
    ctx = AffineContext()
    x, y = ctx.from_interval(bx), ctx.from_interval(by)
    noise = {}
    for form, e in zip((x, y), eps):
        noise.update({k: e for k in form.deviations})
    vx, vy = _sample(x, noise), _sample(y, noise)
    # a form stands for the points of its affine image that lie in its bound
    assume(vx in bx and vy in by)
    assert vx + vy in ctx.add(x, y).interval()
    assert vx - vy in ctx.sub(x, y).interval()
    assert vx * vy in ctx.mul(x, y).interval()
    assert vx * vx in ctx.sqr(x).interval()
    assert abs(vx) in ctx.abs(x).interval()
    if bx.lo > 0:
        assert math.sqrt(vx) in ctx.sqrt(x).interval()
    if (by.lo > 0 or by.hi < 0) and vy != 0.0:
        assert vx / vy in ctx.div(x, y).interval()


@given(boxes(), boxes())
@settings(max_examples=300, deadline=None)
def test_product_never_wider_than_interval_product(bx, by):
    ctx = AffineContext()
    p = ctx.mul(ctx.from_interval(bx), ctx.from_interval(by)).interval()
    q = bx * by
    assert p.lo >= q.lo - 1e-9 * max(1.0, q.mag) and p.hi <= q.hi + 1e-9 * max(1.0, q.mag)


@given(st.floats(0.0, 0.9), st.floats(0.01, 0.5))
@settings(max_examples=60, deadline=None)
def test_first_pair_tighter_or_equal_to_interval(lo, span):
    box = (lo, min(1.0, lo + span))
    ia = ia_range(box, 2, max_pairs=1)
    aa = aa_range(box, 2, max_pairs=1)
    for tag in ("A", "a", "b", "c", "t", "X"):
        slack = 1e-9 * max(1.0, ia[tag].mag)
        assert aa[tag].width <= ia[tag].width + slack, tag


def test_large_dimension_run_explodes():
    rep = aa_range((0.11, 0.75), 8)
    assert not rep["A"].is_finite() or rep["A"].width >= 1e300


def test_ops_hypot_and_sign():
    ops = AffineOps()
    h = ops.value(ops.hypot(ops.const(3.0), ops.const(4.0)))
    assert 5.0 in h
    assert np.isclose(h.width, 0.0, atol=1e-9)
    with pytest.raises(AttributeError):
        ops.no_such_op
