"""Simulated two's-complement fixed-point arithmetic with overflow telemetry.

Values are stored as integer mantissas ``raw`` with ``value = raw * 2**-f``
where ``f`` is the number of fraction bits. Every operation is computed
exactly on Python integers, rounded to nearest-even at the format's
granularity and then saturated. Saturation is the error channel: each
out-of-range result is recorded as an :class:`OverflowEvent`.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DivideByZero, FixedOverflow, NegativeSqrt

__all__ = [
    "FixedFormat",
    "FixedScalar",
    "OverflowEvent",
    "OverflowLog",
    "parse_format",
    "fx_quantize",
    "value_of",
    "fx_add",
    "fx_sub",
    "fx_mul",
    "fx_div",
    "fx_sqrt",
    "fx_abs",
    "fx_neg",
    "FixedOps",
    "GUARD_BITS",
    "events_to_csv",
]


@dataclass(frozen=True)
class FixedFormat:
    """Q-format: ``word_length`` total bits, ``integer_bits`` including sign."""

    word_length: int
    integer_bits: int

    def __post_init__(self):
        if not 2 <= self.word_length <= 64:
            raise ValueError(f"word_length must be in 2..64, got {self.word_length}")
        if not 1 <= self.integer_bits <= self.word_length:
            raise ValueError(
                f"integer_bits must be in 1..{self.word_length}, got {self.integer_bits}"
            )

    @property
    def fraction_bits(self) -> int:
        return self.word_length - self.integer_bits

    @property
    def raw_min(self) -> int:
        return -(1 << (self.word_length - 1))

    @property
    def raw_max(self) -> int:
        return (1 << (self.word_length - 1)) - 1

    @property
    def ulp(self) -> float:
        return math.ldexp(1.0, -self.fraction_bits)

    @property
    def min_value(self) -> float:
        return -math.ldexp(1.0, self.integer_bits - 1)

    @property
    def max_value(self) -> float:
        return math.ldexp(1.0, self.integer_bits - 1) - self.ulp

    def __str__(self):
        return f"{self.word_length}:{self.integer_bits}"


def parse_format(text: str) -> FixedFormat:
    """Parse a ``"WL:IWL"`` string such as ``"32:2"``."""
    try:
        wl, iwl = text.strip().split(":")
        return FixedFormat(int(wl), int(iwl))
    except ValueError as exc:
        raise ValueError(f"invalid fixed-point format {text!r} (expected WL:IWL): {exc}") from None


@dataclass(frozen=True)
class FixedScalar:
    raw: int
    format: FixedFormat

    def __post_init__(self):
        if not self.format.raw_min <= self.raw <= self.format.raw_max:
            raise ValueError(f"mantissa {self.raw} does not fit in {self.format}")

    @property
    def value(self) -> float:
        return math.ldexp(float(self.raw), -self.format.fraction_bits) if self.raw else 0.0

    def __float__(self):
        return self.value

    def __repr__(self):
        return f"FixedScalar({self.value!r}, {self.format})"


@dataclass(frozen=True)
class OverflowEvent:
    operation: str
    operands: tuple
    ideal_value: float
    stored_value: float
    variable: str = ""
    sweep: int = -1
    i: int = -1
    j: int = -1


@dataclass
class OverflowLog:
    """Per-run event log. In strict mode the first event raises."""

    strict: bool = False
    events: list = field(default_factory=list)

    def record(self, event: OverflowEvent):
        self.events.append(event)
        if self.strict:
            raise FixedOverflow(event)

    def __len__(self):
        return len(self.events)


# --- integer rounding helpers (shared with the engine scalar kind) ---------

def _round_shift(x: int, shift: int) -> int:
    """``x / 2**shift`` rounded to nearest, ties to even."""
    if shift <= 0:
        return x << -shift
    q = x >> shift
    rem = x - (q << shift)
    half = 1 << (shift - 1)
    if rem > half or (rem == half and q & 1):
        q += 1
    return q


def _div_rne(num: int, den: int) -> int:
    if den < 0:
        num, den = -num, -den
    q, r = divmod(num, den)
    twice = 2 * r
    if twice > den or (twice == den and q & 1):
        q += 1
    return q


def _isqrt_rn(x: int) -> int:
    # sqrt of an integer is never exactly halfway between integers
    s = math.isqrt(x)
    return s + 1 if x - s * s > s else s


def _saturate(raw: int, fmt: FixedFormat) -> int:
    return fmt.raw_max if raw > fmt.raw_max else fmt.raw_min if raw < fmt.raw_min else raw


def _to_real(raw: int, frac: int) -> float:
    return float(Fraction(raw, 1 << frac)) if frac >= 0 else float(raw << -frac)


# --- public scalar operations ---------------------------------------------

def _finish(raw: int, fmt: FixedFormat, op: str, operands: tuple, log: OverflowLog | None,
            ideal: float | None = None) -> FixedScalar:
    stored = _saturate(raw, fmt)
    if stored != raw and log is not None:
        ideal = _to_real(raw, fmt.fraction_bits) if ideal is None else ideal
        log.record(OverflowEvent(op, operands, ideal, _to_real(stored, fmt.fraction_bits)))
    return FixedScalar(stored, fmt)


def fx_quantize(x: float, fmt: FixedFormat, log: OverflowLog | None = None) -> FixedScalar:
    """Round ``x`` to the nearest multiple of the format's ulp (ties to even), saturating."""
    if math.isnan(x):
        raise ValueError("cannot quantize NaN")
    if math.isinf(x):
        raw = fmt.raw_max + 1 if x > 0 else fmt.raw_min - 1
        return _finish(raw, fmt, "quantize", (x,), log, ideal=x)
    # scaling by a power of two is exact, so round() sees the true value
    scaled = math.ldexp(x, fmt.fraction_bits)
    if math.isinf(scaled):
        raw = fmt.raw_max + 1 if x > 0 else fmt.raw_min - 1
        return _finish(raw, fmt, "quantize", (x,), log, ideal=x)
    raw = round(scaled)
    return _finish(raw, fmt, "quantize", (x,), log, ideal=x)


def value_of(s: FixedScalar) -> float:
    return s.value


def _check_same(x: FixedScalar, y: FixedScalar) -> FixedFormat:
    if x.format != y.format:
        raise ValueError(f"format mismatch: {x.format} vs {y.format}")
    return x.format


def fx_add(x: FixedScalar, y: FixedScalar, log: OverflowLog | None = None) -> FixedScalar:
    fmt = _check_same(x, y)
    return _finish(x.raw + y.raw, fmt, "add", (x.value, y.value), log)


def fx_sub(x: FixedScalar, y: FixedScalar, log: OverflowLog | None = None) -> FixedScalar:
    fmt = _check_same(x, y)
    return _finish(x.raw - y.raw, fmt, "sub", (x.value, y.value), log)


def fx_mul(x: FixedScalar, y: FixedScalar, log: OverflowLog | None = None) -> FixedScalar:
    fmt = _check_same(x, y)
    raw = _round_shift(x.raw * y.raw, fmt.fraction_bits)
    return _finish(raw, fmt, "mul", (x.value, y.value), log)


def fx_div(x: FixedScalar, y: FixedScalar, log: OverflowLog | None = None) -> FixedScalar:
    fmt = _check_same(x, y)
    if y.raw == 0:
        raise DivideByZero("fixed-point division by zero")
    raw = _div_rne(x.raw << fmt.fraction_bits, y.raw)
    return _finish(raw, fmt, "div", (x.value, y.value), log)


def fx_sqrt(x: FixedScalar, log: OverflowLog | None = None) -> FixedScalar:
    fmt = x.format
    raw = x.raw
    if raw < 0:
        if raw < -1:
            raise NegativeSqrt(f"square root of negative value {x.value}")
        raw = 0
    return _finish(_isqrt_rn(raw << fmt.fraction_bits), fmt, "sqrt", (x.value,), log)


def fx_abs(x: FixedScalar, log: OverflowLog | None = None) -> FixedScalar:
    return _finish(abs(x.raw), x.format, "abs", (x.value,), log)


def fx_neg(x: FixedScalar, log: OverflowLog | None = None) -> FixedScalar:
    return _finish(-x.raw, x.format, "neg", (x.value,), log)


# --- scalar kind for the Jacobi engine ------------------------------------

# Expression temporaries live in a wider accumulator with the same fraction
# bits and 2*IWL+3 integer bits: enough for every intermediate of one Jacobi
# step when the stored variables are in range. Overflow is therefore
# detected where a value is assigned to an algorithm variable. sqrt(x^2+y^2)
# is one fused operation; rounding the squares separately lets tiny c
# underflow and pushes |t| above 1 at short word lengths.
GUARD_BITS = 3


class FixedOps:
    """Scalar kind over raw integer mantissas for :mod:`evdrange.jacobi`.

    Values handed to the engine are plain ints. Stored variables are kept
    in the run format; temporaries in the accumulator format.
    """

    kind = "fixed"

    def __init__(self, fmt: FixedFormat, log: OverflowLog | None = None):
        self.fmt = fmt
        self.frac = fmt.fraction_bits
        acc_bits = fmt.word_length + fmt.integer_bits + GUARD_BITS
        self.acc_min = -(1 << (acc_bits - 1))
        self.acc_max = (1 << (acc_bits - 1)) - 1
        self.log = log if log is not None else OverflowLog()
        self.position = (-1, -1, -1)
        self.zero = 0
        self.one = 1 << self.frac

    def const(self, x: float) -> int:
        return fx_quantize(x, self.fmt).raw

    def value(self, raw: int) -> float:
        return math.ldexp(float(raw), -self.frac) if raw else 0.0

    def _acc(self, raw: int, op: str, operands) -> int:
        if self.acc_min <= raw <= self.acc_max:
            return raw
        stored = self.acc_max if raw > self.acc_max else self.acc_min
        sweep, i, j = self.position
        self.log.record(OverflowEvent(op, tuple(self.value(o) for o in operands),
                                      _to_real(raw, self.frac), self.value(stored),
                                      "tmp-expr", sweep, i, j))
        return stored

    def add(self, x, y):
        return self._acc(x + y, "add", (x, y))

    def sub(self, x, y):
        return self._acc(x - y, "sub", (x, y))

    def mul(self, x, y):
        return self._acc(_round_shift(x * y, self.frac), "mul", (x, y))

    def sqr(self, x):
        return self.mul(x, x)

    def halve(self, x):
        return self._acc(_round_shift(x, 1), "mul", (x,))

    def div(self, x, y):
        if y == 0:
            raise DivideByZero("fixed-point division by zero")
        return self._acc(_div_rne(x << self.frac, y), "div", (x, y))

    def sqrt(self, x):
        if x < 0:
            if x < -1:
                raise NegativeSqrt(f"square root of negative value {self.value(x)}")
            x = 0
        return self._acc(_isqrt_rn(x << self.frac), "sqrt", (x,))

    def hypot(self, x, y):
        # the sum of squares is kept at double fraction width, so the
        # result is sqrt(x^2 + y^2) rounded once and never below max(|x|, |y|)
        return self._acc(_isqrt_rn(x * x + y * y), "hypot", (x, y))

    def abs(self, x):
        return x if x >= 0 else -x

    def sign_ratio(self, num, den):
        # sign((b - a) / c) without forming the quotient; sign(0) = +1
        if num == 0:
            return self.one
        return self.one if (num > 0) == (den > 0) else -self.one

    def is_zero(self, x) -> bool:
        return x == 0

    def store(self, tag: str, raw: int) -> int:
        fmt = self.fmt
        if fmt.raw_min <= raw <= fmt.raw_max:
            return raw
        stored = fmt.raw_max if raw > fmt.raw_max else fmt.raw_min
        sweep, i, j = self.position
        self.log.record(OverflowEvent("store", (self.value(raw),), _to_real(raw, self.frac),
                                      self.value(stored), tag, sweep, i, j))
        return stored


EVENT_COLUMNS = ("sweep", "i", "j", "variable", "operation", "ideal_value", "stored_value")


def events_to_csv(events) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EVENT_COLUMNS)
    for ev in events:
        writer.writerow([ev.sweep, ev.i, ev.j, ev.variable, ev.operation,
                         repr(ev.ideal_value), repr(ev.stored_value)])
    return buf.getvalue()
