"""Affine arithmetic: values as a center plus linear terms in shared noise symbols.

A form ``x0 + sum_i x_i * e_i + [-r, r]`` with every ``e_i`` in [-1, 1]
represents all values compatible with the current noise assignment.
Linear operations are exact; nonlinear ones (product, reciprocal, square
root, absolute value) use min-range linear enclosures whose error goes into
the residual radius ``r``. Every form also carries an interval enclosure
computed alongside, and ranges are read off the intersection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .intervals import Interval

__all__ = ["AffineForm", "AffineContext", "AffineOps", "MAX_SYMBOLS"]

MAX_SYMBOLS = 256
# relative slack added per operation for floating-point rounding of the coefficients
_EPS = 2.0 ** -51


@dataclass(frozen=True)
class AffineForm:
    """``center + sum(dev_k * e_k) +- residual``, optionally cut by ``bound``.

    ``bound`` is an interval enclosure of the same quantity computed in
    parallel with interval arithmetic. The reported range is the
    intersection, so an affine result is never wider than the interval one.
    """

    center: float
    deviations: dict = field(default_factory=dict)
    residual: float = 0.0
    bound: Interval | None = None

    @classmethod
    def constant(cls, x: float) -> "AffineForm":
        return cls(float(x), {}, 0.0)

    @classmethod
    def unbounded(cls) -> "AffineForm":
        return cls(0.0, {}, math.inf)

    @property
    def radius(self) -> float:
        return sum(abs(v) for v in self.deviations.values()) + self.residual

    def is_unbounded(self) -> bool:
        return not math.isfinite(self.center) or math.isinf(self.residual)

    def _concretize(self) -> Interval:
        if self.is_unbounded():
            return Interval.entire()
        rad = self.radius
        if rad == 0.0:
            return Interval(self.center, self.center)
        lo, hi = self.center - rad, self.center + rad
        if not (math.isfinite(lo) and math.isfinite(hi)):
            return Interval(-math.inf if not math.isfinite(lo) else lo,
                            math.inf if not math.isfinite(hi) else hi)
        return Interval(math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf))

    def interval(self) -> Interval:
        """Range of the form: its concretization intersected with ``bound``."""
        iv = self._concretize()
        if self.bound is None:
            return iv
        lo, hi = max(iv.lo, self.bound.lo), min(iv.hi, self.bound.hi)
        # both are sound enclosures, so they can only miss by rounding
        return Interval(lo, hi) if lo <= hi else self.bound

    def __repr__(self):
        return (f"AffineForm(center={self.center!r}, symbols={len(self.deviations)}, "
                f"residual={self.residual!r})")


class AffineContext:
    """Owns the noise-symbol counter and symbol budget of one analysis run."""

    def __init__(self, max_symbols: int = MAX_SYMBOLS):
        self.max_symbols = max_symbols
        self._next = 0

    def new_symbol(self) -> int:
        self._next += 1
        return self._next

    def from_interval(self, iv: Interval) -> AffineForm:
        if not iv.is_finite():
            return AffineForm(0.0, {}, math.inf, iv)
        if iv.lo == iv.hi:
            return AffineForm.constant(iv.lo)
        half = 0.5 * (iv.hi - iv.lo)
        center = iv.lo + half
        # exact shortfall of the rounded center/half
        c, h = Fraction(center), Fraction(half)
        gap = max(c - h - Fraction(iv.lo), Fraction(iv.hi) - c - h, Fraction(0))
        slack = float(gap)
        if Fraction(slack) < gap:
            slack = math.nextafter(slack, math.inf)
        return AffineForm(center, {self.new_symbol(): half}, slack, iv)

    def make(self, center: float, devs: dict, residual: float,
             bound: Interval | None = None) -> AffineForm:
        if bound is not None and bound.is_finite() and bound.lo == bound.hi:
            return AffineForm.constant(bound.lo)
        if not math.isfinite(center) or not math.isfinite(residual):
            return self._fallback(bound)
        mag = abs(center)
        for v in devs.values():
            if not math.isfinite(v):
                return self._fallback(bound)
            mag += abs(v)
        residual += _EPS * mag
        if not math.isfinite(residual):
            return self._fallback(bound)
        if len(devs) > self.max_symbols:
            ranked = sorted(devs.items(), key=lambda kv: abs(kv[1]), reverse=True)
            keep = dict(ranked[: self.max_symbols])
            residual += sum(abs(v) for _, v in ranked[self.max_symbols:])
            devs = keep
        return AffineForm(center, devs, residual, bound)

    def _fallback(self, bound: Interval | None) -> AffineForm:
        # coefficients overflowed; the interval enclosure may still be finite
        if bound is not None and bound.is_finite():
            return self.from_interval(bound)
        return AffineForm(0.0, {}, math.inf, bound)

    # linear ------------------------------------------------------------
    def add(self, x: AffineForm, y: AffineForm) -> AffineForm:
        bound = x.interval() + y.interval()
        if x.is_unbounded() or y.is_unbounded():
            return self._fallback(bound)
        devs = dict(x.deviations)
        for k, v in y.deviations.items():
            devs[k] = devs.get(k, 0.0) + v
        return self.make(x.center + y.center, devs, x.residual + y.residual, bound)

    def scale(self, x: AffineForm, alpha: float) -> AffineForm:
        bound = x.interval() * alpha
        if x.is_unbounded():
            return self._fallback(bound)
        return self.make(alpha * x.center, {k: alpha * v for k, v in x.deviations.items()},
                         abs(alpha) * x.residual, bound)

    def sub(self, x: AffineForm, y: AffineForm) -> AffineForm:
        return self.add(x, self.scale(y, -1.0))

    def affine(self, x: AffineForm, alpha: float, zeta: float, delta: float,
               bound: Interval | None = None) -> AffineForm:
        """``alpha * x + zeta`` with extra uncertainty ``delta`` in the residual."""
        if x.is_unbounded():
            return self._fallback(bound)
        return self.make(alpha * x.center + zeta,
                         {k: alpha * v for k, v in x.deviations.items()},
                         abs(alpha) * x.residual + delta, bound)

    # nonlinear ---------------------------------------------------------
    def mul(self, x: AffineForm, y: AffineForm) -> AffineForm:
        bound = x.interval() * y.interval()
        if x.is_unbounded() or y.is_unbounded():
            if _is_exact_zero(x) or _is_exact_zero(y):
                return AffineForm.constant(0.0)
            return self._fallback(bound)
        x0, y0 = x.center, y.center
        devs = {k: y0 * v for k, v in x.deviations.items()}
        for k, v in y.deviations.items():
            devs[k] = devs.get(k, 0.0) + x0 * v
        residual = abs(x0) * y.residual + abs(y0) * x.residual + x.radius * y.radius
        return self.make(x0 * y0, devs, residual, bound)

    def sqr(self, x: AffineForm) -> AffineForm:
        iv = x.interval()
        bound = iv.sqr()
        if x.is_unbounded():
            return self._fallback(bound)
        if iv.lo < 0.0 < iv.hi:
            # no sign-definite linearization; keep only the range
            return self.from_interval(bound)
        if iv.hi <= 0.0:
            x, iv = self.scale(x, -1.0), Interval(-iv.hi, -iv.lo)
        a, b = iv.lo, iv.hi
        if a == b:
            return AffineForm.constant(a * a)
        # min-range: slope of x^2 at the low end; error x^2 - 2ax spans [-a^2, b^2 - 2ab]
        alpha = 2.0 * a
        d_min, d_max = -a * a, b * b - alpha * b
        return self.affine(x, alpha, 0.5 * (d_max + d_min), 0.5 * (d_max - d_min), bound)

    def reciprocal(self, y: AffineForm) -> AffineForm:
        iv = y.interval()
        if iv.lo <= 0.0 <= iv.hi:
            return AffineForm.unbounded()
        if iv.hi < 0.0:
            return self.scale(self.reciprocal(self.scale(y, -1.0)), -1.0)
        a, b = iv.lo, iv.hi
        bound = 1.0 / iv
        bb = b * b
        if y.is_unbounded() or math.isinf(b) or bb == 0.0 or math.isinf(bb) or math.isinf(1.0 / a):
            return self.from_interval(bound) if bound.is_finite() else self._fallback(bound)
        alpha = -1.0 / bb
        d_max = 1.0 / a - alpha * a
        d_min = 2.0 / b
        return self.affine(y, alpha, 0.5 * (d_max + d_min), 0.5 * (d_max - d_min), bound)

    def div(self, x: AffineForm, y: AffineForm) -> AffineForm:
        q = self.mul(x, self.reciprocal(y))
        bound = x.interval() / y.interval()
        if q.bound is not None and not q.is_unbounded():
            lo, hi = max(q.bound.lo, bound.lo), min(q.bound.hi, bound.hi)
            if lo <= hi:
                return AffineForm(q.center, q.deviations, q.residual, Interval(lo, hi))
        return q

    def sqrt(self, x: AffineForm) -> AffineForm:
        iv = x.interval()
        bound = iv.sqrt()
        a, b = max(iv.lo, 0.0), iv.hi
        if b <= 0.0:
            return AffineForm.constant(0.0)
        if math.isinf(b) or x.is_unbounded():
            return self.from_interval(bound) if bound.is_finite() else self._fallback(bound)
        if a == b:
            return AffineForm.constant(math.sqrt(a))
        rb = math.sqrt(b)
        alpha = 0.5 / rb
        d_min = math.sqrt(a) - alpha * a
        d_max = rb - alpha * b
        return self.affine(x, alpha, 0.5 * (d_max + d_min), 0.5 * (d_max - d_min), bound)

    def abs(self, x: AffineForm) -> AffineForm:
        iv = x.interval()
        if iv.lo >= 0.0:
            return x
        if iv.hi <= 0.0:
            return self.scale(x, -1.0)
        return self.from_interval(abs(iv))

    def sign(self, x: AffineForm) -> AffineForm:
        s = x.interval().sign()
        return AffineForm.constant(s.lo) if s.lo == s.hi else self.from_interval(s)


def _is_exact_zero(x: AffineForm) -> bool:
    return x.center == 0.0 and not x.deviations and x.residual == 0.0


class AffineOps:
    """Affine scalar kind for the generic Jacobi engine."""

    kind = "affine"

    def __init__(self, context: AffineContext | None = None):
        self.ctx = context if context is not None else AffineContext()
        self.zero = AffineForm.constant(0.0)
        self.one = AffineForm.constant(1.0)
        self.position = (-1, -1, -1)

    def const(self, x: float) -> AffineForm:
        return AffineForm.constant(x)

    @staticmethod
    def value(x: AffineForm) -> Interval:
        return x.interval()

    def add(self, x, y):
        return self.ctx.add(x, y)

    def sub(self, x, y):
        return self.ctx.sub(x, y)

    def mul(self, x, y):
        return self.ctx.mul(x, y)

    def sqr(self, x):
        return self.ctx.sqr(x)

    def halve(self, x):
        return self.ctx.scale(x, 0.5)

    def div(self, x, y):
        return self.ctx.div(x, y)

    def sqrt(self, x):
        return self.ctx.sqrt(x)

    def hypot(self, x, y):
        return self.ctx.sqrt(self.ctx.add(self.ctx.sqr(x), self.ctx.sqr(y)))

    def abs(self, x):
        return self.ctx.abs(x)

    def sign_ratio(self, num, den):
        return self.ctx.sign(self.ctx.div(num, den))

    def is_zero(self, x) -> bool:
        return _is_exact_zero(x)

    def store(self, tag, x):
        return x
