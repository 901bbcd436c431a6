"""Closed real intervals with outward-rounded arithmetic.

Endpoints may be infinite. Division by an interval that contains zero
yields ``[-inf, inf]`` instead of raising, so range explosion is data.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["Interval", "IntervalOps", "hull"]

_INF = math.inf
_MAX = 1.7976931348623157e308
_TINY = 2.2250738585072014e-308


def _down(x: float) -> float:
    return math.nextafter(x, -_INF) if math.isfinite(x) else x


def _up(x: float) -> float:
    return math.nextafter(x, _INF) if math.isfinite(x) else x


def _is_pow2(x: float) -> bool:
    return x != 0.0 and math.isfinite(x) and abs(math.frexp(x)[0]) == 0.5


def _sum_exact(x: float, y: float, s: float) -> bool:
    if x == 0.0 or y == 0.0 or not math.isfinite(s):
        return True
    if abs(x) < abs(y):
        x, y = y, x
    return y - (s - x) == 0.0


def _add_lo(x: float, y: float) -> float:
    s = x + y
    return s if _sum_exact(x, y, s) else _down(s)


def _add_hi(x: float, y: float) -> float:
    s = x + y
    return s if _sum_exact(x, y, s) else _up(s)


def _prod(x: float, y: float) -> float:
    # 0 * inf arises only from an exact zero endpoint; the true product is 0
    if x == 0.0 or y == 0.0:
        return 0.0
    return x * y


def _prod_exact(x: float, y: float, p: float) -> bool:
    if x == 0.0 or y == 0.0:
        return True
    if math.isinf(x) or math.isinf(y):
        return True
    if math.isinf(p):
        return False
    if abs(p) < _TINY:
        # subnormal results can drop bits even for a power-of-two factor
        return Fraction(p) == Fraction(x) * Fraction(y)
    return _is_pow2(x) or _is_pow2(y)


def _mul_bounds(x: Interval, y: Interval):
    p = []
    for a in (x.lo, x.hi):
        for b in (y.lo, y.hi):
            v = _prod(a, b)
            p.append((v, _prod_exact(a, b, v)))
    lo = min(v for v, _ in p)
    hi = max(v for v, _ in p)
    # with ties the endpoint is exact only if every product rounding to it was
    lo_exact = all(e for v, e in p if v == lo)
    hi_exact = all(e for v, e in p if v == hi)
    if not all(e for _, e in p):
        lo, hi = (lo if lo_exact else _down(lo)), (hi if hi_exact else _up(hi))
    return _finite_side(lo, hi)


def _finite_side(lo: float, hi: float):
    # a finite overflowed result is still bounded on its inner side
    if lo == _INF:
        lo = _MAX
    if hi == -_INF:
        hi = -_MAX
    return lo, hi


def _recip_exact(x: float) -> bool:
    if math.isinf(x):
        return True
    r = 1.0 / x
    return _is_pow2(x) and math.isfinite(r) and abs(r) >= _TINY


def _sqrt_down(x: float) -> float:
    r = math.sqrt(x)
    return r if _sqrt_exact(x, r) else max(_down(r), 0.0)


def _sqrt_up(x: float) -> float:
    r = math.sqrt(x)
    return r if _sqrt_exact(x, r) else _up(r)


def _sqrt_exact(x: float, r: float) -> bool:
    return math.isinf(r) or (r * r == x and Fraction(r) ** 2 == Fraction(x))


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @classmethod
    def entire(cls) -> "Interval":
        return cls(-_INF, _INF)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        if math.isinf(self.lo) or math.isinf(self.hi):
            return 0.0 if math.isinf(self.lo) and math.isinf(self.hi) else (
                self.hi if math.isinf(self.lo) else self.lo)
        return 0.5 * (self.lo + self.hi)

    @property
    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, other) -> bool:
        if isinstance(other, Interval):
            return self.lo <= other.lo and other.hi <= self.hi
        return self.lo <= other <= self.hi

    __contains__ = contains

    def join(self, other) -> "Interval":
        if not isinstance(other, Interval):
            other = Interval(other, other)
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def clip(self, lo: float, hi: float) -> "Interval":
        """Intersect with ``[lo, hi]``; a disjoint interval collapses to the nearer end."""
        a, b = max(self.lo, lo), min(self.hi, hi)
        if a > b:
            edge = lo if self.hi < lo else hi
            return Interval(edge, edge)
        return Interval(a, b)

    # arithmetic --------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "Interval":
        return x if isinstance(x, Interval) else Interval(x, x)

    def __add__(self, other):
        o = self._coerce(other)
        return Interval(_add_lo(self.lo, o.lo), _add_hi(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Interval(_add_lo(self.lo, -o.hi), _add_hi(self.hi, -o.lo))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other):
        return Interval(*_mul_bounds(self, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0.0 <= o.hi:
            return Interval.entire()
        lo = 1.0 / o.hi if _recip_exact(o.hi) else _down(1.0 / o.hi)
        hi = 1.0 / o.lo if _recip_exact(o.lo) else _up(1.0 / o.lo)
        return self * Interval(*_finite_side(lo, hi))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __abs__(self):
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))

    def sqr(self) -> "Interval":
        a = abs(self)
        lo, _ = _mul_bounds(Interval(a.lo, a.lo), Interval(a.lo, a.lo))
        _, hi = _mul_bounds(Interval(a.hi, a.hi), Interval(a.hi, a.hi))
        return Interval(max(lo, 0.0), hi)

    def sqrt(self) -> "Interval":
        # the negative part of the domain is dropped
        lo = _sqrt_down(self.lo) if self.lo > 0 else 0.0
        hi = _sqrt_up(self.hi) if self.hi > 0 else 0.0
        return Interval(lo, hi)

    def sign(self) -> "Interval":
        """Enclosure of sign(x) with the convention sign(0) = +1."""
        return Interval(-1.0 if self.lo < 0 else 1.0, 1.0 if self.hi >= 0 else -1.0)

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __str__(self):
        return f"[{_fmt(self.lo)}, {_fmt(self.hi)}]"


def _fmt(x: float) -> str:
    if x == _INF:
        return "+inf"
    if x == -_INF:
        return "-inf"
    return f"{x:.6g}"


def hull(values) -> Interval:
    values = list(values)
    return Interval(min(values), max(values))


class IntervalOps:
    """Interval scalar kind for the generic Jacobi engine."""

    kind = "interval"
    zero = Interval(0.0, 0.0)
    one = Interval(1.0, 1.0)

    def __init__(self):
        self.position = (-1, -1, -1)

    def const(self, x: float) -> Interval:
        return Interval(x, x)

    @staticmethod
    def value(x: Interval) -> Interval:
        return x

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def sqr(self, x):
        return x.sqr()

    def halve(self, x):
        return Interval(0.5 * x.lo, 0.5 * x.hi)

    def div(self, x, y):
        return x / y

    def sqrt(self, x):
        return x.sqrt()

    def hypot(self, x, y):
        return (x.sqr() + y.sqr()).sqrt()

    def abs(self, x):
        return abs(x)

    def sign_ratio(self, num, den):
        return (num / den).sign()

    def is_zero(self, x) -> bool:
        return x.lo == 0.0 and x.hi == 0.0

    def store(self, tag, x):
        return x
