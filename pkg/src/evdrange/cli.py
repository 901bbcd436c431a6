"""Command-line interface: ``evdrange {evd,compare,fixed-sweep,corpus,plot-data}``.

Exit codes: 0 success, 2 usage or input parse error, 3 input not
symmetric, 4 overflow in ``--strict-overflow`` mode.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import FixedOverflow, NotSymmetric, ParseError
from .fixedpoint import events_to_csv, parse_format
from .intervals import Interval
from .jacobi import fixed_jacobi_evd, jacobi_evd, sort_descending
from .linalg import SymMatrix, covariance, random_data, random_spsd, scale_matrix
from .matrixio import load_csv, load_matrix_market, parse_csv_rows
from .metrics import EXACT, fixed_point_sweep
from .ranges import (TAGS, aa_range, analytic_bounds_scaled, analytic_bounds_unscaled,
                     bound_compliance, ia_range, reports_to_table, sim_range)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_SYMMETRIC = 3
EXIT_OVERFLOW = 4

METHOD_ALIASES = {
    "sim": "simulation", "simulation": "simulation",
    "ia": "ia", "aa": "aa",
    "scaled": "analytic-scaled", "analytic-scaled": "analytic-scaled",
    "unscaled": "analytic-unscaled", "analytic-unscaled": "analytic-unscaled",
}
ALL_METHODS = ("simulation", "ia", "aa", "analytic-unscaled", "analytic-scaled")


class UsageError(Exception):
    pass


# --- input sources --------------------------------------------------------

@dataclass(frozen=True)
class GenSpec:
    n_lo: int
    n_hi: int
    seed: int = 0
    count: int = 1
    scale: float = 1.0

    def items(self):
        span = self.n_hi - self.n_lo + 1
        for k in range(self.count):
            yield self.n_lo + k % span, self.seed + k


def parse_gen(text: str, seed_override: int | None = None) -> GenSpec:
    """Parse ``n=8,seed=1,count=10,scale=1.0``; ``n`` may be a range ``2..12``."""
    fields = {}
    for part in text.split(","):
        if not part.strip():
            continue
        key, sep, val = part.partition("=")
        if not sep:
            raise UsageError(f"--gen: expected key=value, got {part!r}")
        fields[key.strip()] = val.strip()
    unknown = set(fields) - {"n", "seed", "count", "scale"}
    if unknown:
        raise UsageError(f"--gen: unknown keys {sorted(unknown)}")
    if "n" not in fields:
        raise UsageError("--gen needs n=")
    try:
        lo, _, hi = fields["n"].partition("..")
        n_lo = int(lo)
        n_hi = int(hi) if hi else n_lo
        spec = GenSpec(n_lo, n_hi, int(fields.get("seed", 0)), int(fields.get("count", 1)),
                       float(fields.get("scale", 1.0)))
    except ValueError as exc:
        raise UsageError(f"--gen: {exc}") from None
    if spec.n_lo < 1 or spec.n_hi < spec.n_lo or spec.count < 0 or not spec.scale > 0:
        raise UsageError("--gen: need 1 <= n_lo <= n_hi, count >= 0, scale > 0")
    if seed_override is not None:
        spec = GenSpec(spec.n_lo, spec.n_hi, seed_override, spec.count, spec.scale)
    return spec


def _load(args) -> SymMatrix:
    return load_matrix_market(args.input) if args.mm else load_csv(args.input)


def _sources(args, need_matrix: bool = True):
    """List of ``(label, SymMatrix)`` from ``--input`` or ``--gen``."""
    if args.input:
        return [(args.input, _load(args))]
    if args.gen:
        spec = parse_gen(args.gen, args.seed)
        return [(f"n={n},seed={s}", random_spsd(n, s, spec.scale)) for n, s in spec.items()]
    if need_matrix:
        raise UsageError("an input is required: --input PATH or --gen n=..")
    return []


def _formats(text: str | None, required: bool):
    if not text:
        if required:
            raise UsageError("--formats needs at least one WL:IWL entry")
        return []
    out = [parse_format(f) for f in text.split(",") if f.strip()]
    if required and not out:
        raise UsageError("--formats needs at least one WL:IWL entry")
    return out


def _methods(text: str | None):
    if not text:
        return list(ALL_METHODS)
    out = []
    for name in text.split(","):
        name = name.strip()
        if name not in METHOD_ALIASES:
            raise UsageError(f"unknown method {name!r}; choose from sim, ia, aa, scaled, unscaled")
        if METHOD_ALIASES[name] not in out:
            out.append(METHOD_ALIASES[name])
    return out


# --- formatting helpers ---------------------------------------------------

def _num(x):
    if isinstance(x, float):
        if x == math.inf:
            return "+inf"
        if x == -math.inf:
            return "-inf"
    return x


def _dump_json(doc) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **doc}, indent=2, allow_nan=False) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) and math.isfinite(v) else _num(v)
                    for v in row])
    return buf.getvalue()


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _g(x) -> str:
    return x if isinstance(x, str) else f"{x:.6g}"


# --- evd ------------------------------------------------------------------

def _evd_one(label, M, args, fmt):
    entry = {"label": label, "n": M.n}
    A, m = M, None
    if args.scale:
        res = scale_matrix(M)
        A, m = res.scaled, res.factor_m
        entry["factor_m"] = m
    if fmt is None:
        r = jacobi_evd(A, args.sweeps, early_exit=args.early_exit)
        entry["mode"] = "float"
    else:
        r = fixed_jacobi_evd(A, fmt, args.sweeps, strict=args.strict_overflow)
        entry["mode"] = f"fixed:{fmt}"
    lam, vecs = sort_descending(r.eigenvalues, r.eigenvectors)
    entry["eigenvalues"] = lam.tolist()
    if m is not None:
        entry["recovered_eigenvalues"] = (lam * m).tolist()
    entry["eigenvectors"] = vecs.tolist()
    entry["sweeps_run"] = r.sweeps_run
    entry["offdiag_residual"] = r.offdiag_residual
    if fmt is not None:
        by_var = Counter(e.variable for e in r.overflow_events)
        entry["overflow"] = {"count": len(r.overflow_events),
                             "by_variable": dict(sorted(by_var.items()))}
    return entry, r


def cmd_evd(args) -> int:
    formats = _formats(args.formats, required=False)
    results = []
    all_events = []
    for label, M in _sources(args):
        for fmt in formats or [None]:
            entry, r = _evd_one(label, M, args, fmt)
            results.append(entry)
            all_events.extend(r.overflow_events)
    if args.overflow_csv:
        with open(args.overflow_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(events_to_csv(all_events))
    if args.fmt == "json":
        _emit(args, _dump_json({"command": "evd", "results": results}))
    elif args.fmt == "csv":
        rows = [("label", "mode", "index", "eigenvalue")]
        for e in results:
            rows += [(e["label"], e["mode"], k, v) for k, v in enumerate(e["eigenvalues"])]
        _emit(args, _csv(rows))
    else:
        lines = []
        for e in results:
            lines.append(f"{e['label']}  [{e['mode']}]  sweeps={e['sweeps_run']}  "
                         f"residual={_g(e['offdiag_residual'])}")
            lines.append("  eigenvalues: " + "  ".join(_g(v) for v in e["eigenvalues"]))
            if "recovered_eigenvalues" in e:
                lines.append(f"  m = {_g(e['factor_m'])}; recovered: "
                             + "  ".join(_g(v) for v in e["recovered_eigenvalues"]))
            if "overflow" in e:
                lines.append(f"  overflow events: {e['overflow']['count']}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# --- compare --------------------------------------------------------------

def _compare_reports(M: SymMatrix | None, box: Interval | None, n: int, methods, sweeps):
    out = []
    if box is None:
        box = Interval(float(M.entries.min()), float(M.entries.max()))
    for method in methods:
        if method == "simulation":
            out.append(sim_range(M, sweeps))
        elif method == "ia":
            out.append(ia_range(box, n, sweeps))
        elif method == "aa":
            out.append(aa_range(box, n, sweeps))
        elif method == "analytic-unscaled":
            out.append(analytic_bounds_unscaled(M))
        else:
            out.append(analytic_bounds_scaled())
    return out


def cmd_compare(args) -> int:
    methods = _methods(args.methods)
    jobs = []
    if args.box:
        try:
            lo, hi = (float(v) for v in args.box.split(","))
            box = Interval(lo, hi)
        except ValueError as exc:
            raise UsageError(f"--box expects lo,hi: {exc}") from None
        if not args.n or args.n < 2:
            raise UsageError("--box needs --n N (N >= 2)")
        needs_matrix = {"simulation", "analytic-unscaled"} & set(methods)
        if needs_matrix:
            raise UsageError(f"methods {sorted(needs_matrix)} need a matrix, not a box")
        jobs.append((f"box={box},n={args.n}", None, box, args.n))
    else:
        for label, M in _sources(args):
            jobs.append((label, M, None, M.n))
    inputs = [(label, _compare_reports(M, box, n, methods, args.sweeps))
              for label, M, box, n in jobs]
    if args.fmt == "json":
        doc = {"command": "compare",
               "inputs": [{"label": label, "reports": [r.to_dict() for r in reps]}
                          for label, reps in inputs]}
        _emit(args, _dump_json(doc))
    elif args.fmt == "csv":
        rows = [("label", "method", "variable", "lo", "hi")]
        for label, reps in inputs:
            rows += [(label, r.method, tag, r[tag].lo, r[tag].hi) for r in reps for tag in TAGS]
        _emit(args, _csv(rows))
    else:
        _emit(args, "\n".join(f"# {label}\n{reports_to_table(reps)}" for label, reps in inputs))
    return EXIT_OK


# --- fixed-sweep ----------------------------------------------------------

def _sweep_inputs(args):
    """``(label, matrix, data)`` triples; ``--gen`` uses synthetic observations."""
    if args.data:
        with open(args.data, encoding="utf-8") as fh:
            data = parse_csv_rows(fh.read())
        M = _load(args) if args.input else covariance(data)
        return [(args.input or args.data, M, data)]
    if args.input:
        return [(args.input, _load(args), None)]
    if args.gen:
        spec = parse_gen(args.gen, args.seed)
        out = []
        for n, s in spec.items():
            data = random_data(n, s, entry_scale=spec.scale)
            out.append((f"n={n},seed={s}", covariance(data), data))
        return out
    raise UsageError("an input is required: --input PATH, --data PATH or --gen n=..")


def cmd_fixed_sweep(args) -> int:
    formats = _formats(args.formats, required=True)
    results = []
    for label, M, data in _sweep_inputs(args):
        for r in fixed_point_sweep(M, formats, data, args.sweeps, strict=args.strict_overflow):
            results.append({"label": label, "format": str(r.format),
                            "word_length": r.format.word_length,
                            "integer_bits": r.format.integer_bits,
                            "sqnr_db": r.sqnr_db, "pc_mse": list(r.pc_mse),
                            "overflow_count": r.overflow_count})
    if args.fmt == "json":
        _emit(args, _dump_json({"command": "fixed-sweep", "sqnr_exact_sentinel": EXACT,
                                "results": results}))
    elif args.fmt == "csv":
        rows = [("label", "format", "sqnr_db", "max_pc_mse", "overflow_count")]
        rows += [(e["label"], e["format"], e["sqnr_db"],
                  max(e["pc_mse"]) if e["pc_mse"] else "", e["overflow_count"]) for e in results]
        _emit(args, _csv(rows))
    else:
        lines = [f"{'input':<20} {'format':<7} {'SQNR dB':>10} {'max PC MSE':>12} {'overflows':>9}"]
        for e in results:
            pm = _g(max(e["pc_mse"])) if e["pc_mse"] else "-"
            lines.append(f"{e['label']:<20} {e['format']:<7} {_g(e['sqnr_db']):>10} "
                         f"{pm:>12} {e['overflow_count']:>9}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# --- corpus ---------------------------------------------------------------

def _corpus_job(job):
    index, n, seed, scale, unscaled, sweeps, formats = job
    M = random_spsd(n, seed, scale)
    target = M if unscaled else scale_matrix(M).scaled
    violations = bound_compliance(sim_range(target, sweeps), analytic_bounds_scaled())
    overflow = 0
    for fmt in formats:
        overflow += len(fixed_jacobi_evd(target, fmt, sweeps).overflow_events)
    return {"index": index, "n": n, "seed": seed,
            "spectral_bound": scale_matrix(M).factor_m,
            "violations": [v.tag for v in violations],
            "overflow_events": overflow,
            "pass": not violations and overflow == 0}


def cmd_corpus(args) -> int:
    if not args.gen:
        raise UsageError("corpus needs --gen n=..,count=..")
    spec = parse_gen(args.gen, args.seed)
    formats = _formats(args.formats, required=False)
    jobs = [(k, n, s, spec.scale, args.unscaled, args.sweeps, formats)
            for k, (n, s) in enumerate(spec.items())]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_corpus_job, jobs, chunksize=16))
    else:
        rows = [_corpus_job(j) for j in jobs]
    agg = {"count": len(rows),
           "passed": sum(r["pass"] for r in rows),
           "with_violations": sum(bool(r["violations"]) for r in rows),
           "total_violations": sum(len(r["violations"]) for r in rows),
           "overflow_events": sum(r["overflow_events"] for r in rows),
           "scaled": not args.unscaled,
           "formats": [str(f) for f in formats]}
    if args.fmt == "json":
        _emit(args, _dump_json({"command": "corpus", "matrices": rows, "aggregate": agg}))
    elif args.fmt == "csv":
        out = [("index", "n", "seed", "pass", "violations", "overflow_events")]
        out += [(r["index"], r["n"], r["seed"], r["pass"], ";".join(r["violations"]),
                 r["overflow_events"]) for r in rows]
        _emit(args, _csv(out))
    else:
        lines = [f"{r['index']:>5} n={r['n']:<3} seed={r['seed']:<6} "
                 f"{'PASS' if r['pass'] else 'FAIL'} {','.join(r['violations'])}" for r in rows]
        lines.append(f"{agg['passed']}/{agg['count']} passed; "
                     f"{agg['total_violations']} violations; {agg['overflow_events']} overflow events")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# --- plot-data ------------------------------------------------------------

def _plot_rows(doc):
    cmd = doc.get("command")
    if cmd == "compare":
        rows = [("label", "method", "variable", "lo", "hi")]
        for inp in doc["inputs"]:
            for rep in inp["reports"]:
                for tag in TAGS:
                    lo, hi = rep["ranges"][tag]
                    rows.append((inp["label"], rep["method"], tag, lo, hi))
        return rows
    if cmd == "fixed-sweep":
        rows = [("label", "word_length", "integer_bits", "metric", "value")]
        for e in doc["results"]:
            base = (e["label"], e["word_length"], e["integer_bits"])
            rows.append(base + ("sqnr_db", e["sqnr_db"]))
            rows += [base + (f"mse_pc{k + 1}", v) for k, v in enumerate(e["pc_mse"])]
            rows.append(base + ("overflow_count", e["overflow_count"]))
        return rows
    raise UsageError(f"plot-data cannot use a report from command {cmd!r}")


def cmd_plotdata(args) -> int:
    if args.report:
        try:
            with open(args.report, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read report {args.report}: {exc}") from None
    elif args.kind:
        buf = io.StringIO()
        sub = argparse.Namespace(**{**vars(args), "fmt": "json", "out": None})
        saved = sys.stdout
        sys.stdout = buf
        try:
            (cmd_compare if args.kind == "compare" else cmd_fixed_sweep)(sub)
        finally:
            sys.stdout = saved
        doc = json.loads(buf.getvalue())
    else:
        raise UsageError("plot-data needs --report PATH or --kind {compare,fixed-sweep}")
    _emit(args, _csv(_plot_rows(doc)))
    return EXIT_OK


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH", help="matrix file (CSV unless --mm)")
    common.add_argument("--mm", action="store_true", help="--input is Matrix Market")
    common.add_argument("--gen", metavar="SPEC",
                        help="generate random SPSD inputs: n=8 or n=2..12,seed=..,count=..,scale=..")
    common.add_argument("--seed", type=int, help="override the --gen seed")
    common.add_argument("--sweeps", type=int, help="number of sweeps (default n)")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--fmt", choices=("json", "csv", "table"), default="table")

    p = argparse.ArgumentParser(prog="evdrange",
                                description="Jacobi EVD range analysis and fixed-point evaluation")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("evd", parents=[common], help="eigen-decompose a matrix")
    e.add_argument("--formats", help="run in fixed point, e.g. 32:2 (comma list)")
    e.add_argument("--scale", action="store_true", help="divide by the spectral-norm bound first")
    e.add_argument("--strict-overflow", action="store_true", help="exit 4 on the first overflow")
    e.add_argument("--early-exit", action="store_true", help="stop once off-diagonal norm is negligible")
    e.add_argument("--overflow-csv", metavar="PATH", help="write overflow events as CSV")
    e.set_defaults(func=cmd_evd)

    c = sub.add_parser("compare", parents=[common], help="range table across methods")
    c.add_argument("--methods", help="comma list of sim, ia, aa, scaled, unscaled (default all)")
    c.add_argument("--box", help="IA/AA input box lo,hi instead of a matrix")
    c.add_argument("--n", type=int, help="dimension for --box")
    c.set_defaults(func=cmd_compare)

    f = sub.add_parser("fixed-sweep", parents=[common], help="SQNR/MSE across fixed formats")
    f.add_argument("--formats", default="50:2,40:2,32:2")
    f.add_argument("--data", metavar="PATH", help="observations CSV (rows) for PC image MSE")
    f.add_argument("--strict-overflow", action="store_true")
    f.set_defaults(func=cmd_fixed_sweep)

    k = sub.add_parser("corpus", parents=[common], help="bound soundness over a random corpus")
    k.add_argument("--unscaled", action="store_true",
                   help="skip scaling (negative control against the scaled bounds)")
    k.add_argument("--formats", help="also count fixed-point overflow in these formats")
    k.add_argument("--jobs", type=int, default=1, help="worker processes")
    k.set_defaults(func=cmd_corpus)

    d = sub.add_parser("plot-data", parents=[common], help="tidy CSV for plotting")
    d.add_argument("--report", metavar="PATH", help="JSON written by compare or fixed-sweep")
    d.add_argument("--kind", choices=("compare", "fixed-sweep"), help="run this command instead")
    d.add_argument("--methods")
    d.add_argument("--box")
    d.add_argument("--n", type=int)
    d.add_argument("--formats", default="50:2,40:2,32:2")
    d.add_argument("--data", metavar="PATH")
    d.add_argument("--strict-overflow", action="store_true")
    d.set_defaults(func=cmd_plotdata)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.sweeps is not None and args.sweeps < 1:
        parser.error("--sweeps must be >= 1")
    try:
        return args.func(args)
    except FixedOverflow as exc:
        print(f"evdrange: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except NotSymmetric as exc:
        print(f"evdrange: {exc}", file=sys.stderr)
        return EXIT_NOT_SYMMETRIC
    except (UsageError, ParseError, ValueError, OSError) as exc:
        print(f"evdrange: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
