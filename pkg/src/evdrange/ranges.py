"""Range estimation for the Jacobi variables.

Four back-ends produce a :class:`RangeReport` (one interval per traced
variable): double-precision simulation, interval arithmetic, affine
arithmetic, and closed-form norm bounds for unscaled and scaled inputs.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .affine import AffineContext, AffineOps, MAX_SYMBOLS
from .errors import NotPSD, UnboundedRange
from .intervals import Interval, IntervalOps
from .jacobi import traced_evd
from .linalg import SymMatrix, spectral_bound

__all__ = [
    "TAGS",
    "METHODS",
    "RangeReport",
    "Violation",
    "sim_range",
    "ia_range",
    "aa_range",
    "analytic_bounds_unscaled",
    "analytic_bounds_scaled",
    "iwl_required",
    "recovery_iwl",
    "bound_compliance",
    "reports_to_json",
    "reports_to_csv",
    "reports_to_table",
]

TAGS = engine.TAGS
METHODS = ("simulation", "ia", "aa", "analytic-unscaled", "analytic-scaled")

# trigonometric ranges reported for the rotation parameters
_TRIG = {"t": (-1.0, 1.0), "cs": (0.0, 1.0), "sn": (-1.0, 1.0)}


@dataclass(frozen=True)
class RangeReport:
    """Per-variable ranges from one method.

    ``history`` (IA/AA only) holds the hull of all entries of A after
    each pair-update, in execution order.
    """

    method: str
    ranges: dict
    history: tuple = field(default=(), compare=False)

    def __post_init__(self):
        missing = set(TAGS) - set(self.ranges)
        if missing:
            raise ValueError(f"report lacks tags {sorted(missing)}")

    def __getitem__(self, tag: str) -> Interval:
        return self.ranges[tag]

    def to_dict(self) -> dict:
        return {"method": self.method,
                "ranges": {tag: [_num(self.ranges[tag].lo), _num(self.ranges[tag].hi)]
                           for tag in TAGS}}


def _num(x: float):
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    return x


# --- simulation -----------------------------------------------------------

def sim_range(A, sweeps: int | None = None) -> RangeReport:
    """Min/max of every variable over a traced double-precision run.

    The A row also covers the input entries.
    """
    M = A if isinstance(A, SymMatrix) else SymMatrix(A)
    if M.n < 2:
        raise ValueError("range tracing needs n >= 2")
    _, env = traced_evd(M, sweeps)
    ranges = {tag: Interval(*env[tag]) for tag in TAGS}
    ranges["A"] = ranges["A"].join(Interval(float(M.entries.min()), float(M.entries.max())))
    return RangeReport("simulation", ranges)


# --- interval / affine propagation ---------------------------------------

class _Envelope:
    def __init__(self):
        self.ranges: dict = {}

    def __call__(self, tag, iv: Interval):
        cur = self.ranges.get(tag)
        self.ranges[tag] = iv if cur is None else cur.join(iv)


def _matrix_hull(A, value) -> Interval:
    return Interval(min(value(x).lo for row in A for x in row),
                    max(value(x).hi for row in A for x in row))


def _propagate(A, ops, n: int, sweeps: int, max_pairs: int | None, method: str) -> RangeReport:
    env = _Envelope()
    value = ops.value
    for row in A:
        for x in row:
            env("A", value(x))
    X = engine.identity(n, ops)
    history = []
    done = 0
    for index in range(sweeps):
        for i in range(n):
            for j in range(i + 1, n):
                if max_pairs is not None and done >= max_pairs:
                    break
                ops.position = (index, i, j)
                engine.pair_update(A, X, i, j, ops, env)
                history.append(_matrix_hull(A, value))
                done += 1
    for k in range(n):
        env("lambda", value(A[k][k]))
    ranges = dict(env.ranges)
    for tag, (lo, hi) in _TRIG.items():
        ranges[tag] = ranges[tag].clip(lo, hi)
    return RangeReport(method, ranges, tuple(history))


def _check_box(box: Interval, n: int):
    if not isinstance(box, Interval):
        box = Interval(*box)
    if not box.is_finite():
        raise UnboundedRange("input box must be finite")
    if n < 2:
        raise ValueError("n must be >= 2")
    return box


def _diag_box(box: Interval, psd: bool) -> Interval:
    return Interval(max(0.0, box.lo), box.hi) if psd and box.hi >= 0.0 else box


def ia_range(input_box, n: int, sweeps: int | None = None, psd: bool = True,
             max_pairs: int | None = None) -> RangeReport:
    """Interval-arithmetic ranges with every entry of A set to ``input_box``.

    Diagonal entries start at ``[max(0, lo), hi]`` when ``psd``. t, cs and
    sn are clipped to their trigonometric ranges in the report only;
    propagation itself is unclipped. ``max_pairs`` stops after that many
    pair-updates.
    """
    box = _check_box(input_box, n)
    diag = _diag_box(box, psd)
    A = [[diag if k == l else box for l in range(n)] for k in range(n)]
    return _propagate(A, IntervalOps(), n, n if sweeps is None else sweeps, max_pairs, "ia")


def aa_range(input_box, n: int, sweeps: int | None = None, psd: bool = True,
             max_pairs: int | None = None, max_symbols: int = MAX_SYMBOLS) -> RangeReport:
    """Affine-arithmetic counterpart of :func:`ia_range`.

    Each independent entry of A gets its own noise symbol; mirrored entries
    share one form.
    """
    box = _check_box(input_box, n)
    diag = _diag_box(box, psd)
    ops = AffineOps(AffineContext(max_symbols))
    A = [[None] * n for _ in range(n)]
    for k in range(n):
        for l in range(k, n):
            A[k][l] = A[l][k] = ops.ctx.from_interval(diag if k == l else box)
    return _propagate(A, ops, n, n if sweeps is None else sweeps, max_pairs, "aa")


# --- analytic bounds ------------------------------------------------------

def _bounds(method: str, m: float) -> RangeReport:
    sym, pos, unit = Interval(-m, m), Interval(0.0, m), Interval(-1.0, 1.0)
    # tmp also carries entries of X during the eigenvector update
    wide = max(m, 1.0)
    return RangeReport(method, {
        "A": sym, "c": sym, "tmp": Interval(-wide, wide),
        "a": pos, "b": pos, "lambda": pos,
        "t": unit, "sn": unit, "X": unit,
        "cs": Interval(0.0, 1.0),
    })


def analytic_bounds_unscaled(M) -> RangeReport:
    """Input-dependent bounds for a symmetric PSD matrix, from m = sqrt(||M||_1 ||M||_inf)."""
    M = M if isinstance(M, SymMatrix) else SymMatrix(M)
    if np.any(np.diag(M.entries) < 0.0):
        raise NotPSD("a PSD matrix has a non-negative diagonal")
    return _bounds("analytic-unscaled", spectral_bound(M))


_SCALED = _bounds("analytic-scaled", 1.0)


def analytic_bounds_scaled() -> RangeReport:
    """Bounds for inputs divided by their spectral-norm bound; the same for every input."""
    return _SCALED


# --- word lengths and compliance -----------------------------------------

def iwl_required(rng, signed: bool = False) -> int:
    """Integer bits needed for the integer part of every value in ``rng``.

    Counts magnitude bits of the larger endpoint, ``floor(log2(max|x|)) + 1``;
    ``signed`` adds a sign bit. The default reproduces the customary sizing
    from simulation extremes (e.g. a maximum of 9.58e6 needs 24 bits).
    """
    rng = rng if isinstance(rng, Interval) else Interval(*rng)
    if not rng.is_finite():
        raise UnboundedRange("cannot size an unbounded range")
    mag = rng.mag
    bits = math.frexp(mag)[1] if mag > 0.0 else 0
    bits = max(bits, 0)
    return bits + 1 if signed else bits


def recovery_iwl(m: float) -> int:
    """Integer bits to hold eigenvalues recovered as ``m * lambda_hat``: ceil(log2 m)."""
    if not m > 0.0 or math.isinf(m):
        raise ValueError("scale factor must be positive and finite")
    return max(0, math.ceil(math.log2(m)))


@dataclass(frozen=True)
class Violation:
    tag: str
    observed: Interval
    bound: Interval


def bound_compliance(envelope: RangeReport, bounds: RangeReport,
                     rtol: float = 1e-12) -> list:
    """Tags whose ``envelope`` range is not inside the ``bounds`` range.

    ``rtol`` is slack relative to the bound's magnitude (at least 1) so
    that last-bit rounding of a double-precision run on a matrix whose
    eigenvalue attains the bound is not reported.
    """
    if set(envelope.ranges) != set(bounds.ranges):
        raise ValueError("reports cover different variables")
    out = []
    for tag in TAGS:
        obs, bnd = envelope.ranges[tag], bounds.ranges[tag]
        slack = rtol * max(1.0, bnd.mag) if bnd.is_finite() else 0.0
        if obs.lo < bnd.lo - slack or obs.hi > bnd.hi + slack:
            out.append(Violation(tag, obs, bnd))
    return out


# --- serialization --------------------------------------------------------

def reports_to_json(reports, extra: dict | None = None) -> str:
    doc = {"schema_version": 1, "reports": [r.to_dict() for r in reports]}
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2, sort_keys=False)


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "variable", "lo", "hi"])
    for r in reports:
        for tag in TAGS:
            iv = r.ranges[tag]
            w.writerow([r.method, tag, _cell(iv.lo), _cell(iv.hi)])
    return buf.getvalue()


def _cell(x: float) -> str:
    v = _num(x)
    return v if isinstance(v, str) else repr(v)


def _short(iv: Interval) -> str:
    return str(iv)


def reports_to_table(reports) -> str:
    """Aligned text table: one row per variable, one column per method."""
    header = ["variable"] + [r.method for r in reports]
    rows = [[tag] + [_short(r.ranges[tag]) for r in reports] for tag in TAGS]
    widths = [max(len(row[c]) for row in [header] + rows) for c in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in [header] + rows]
    return "\n".join(lines) + "\n"
