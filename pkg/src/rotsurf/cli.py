"""Command-line entry point.

Reports are byte-stable: fields keep a fixed order and every float is written
with 17 significant digits.  Input errors go to stderr with the JSON path of the
offending field and exit with status 1; a failed verification exits with 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from .classifier import (
    CLOSED_FORM_TOLERANCES,
    ORACLE_TOLERANCES,
    classify,
    default_s_grid,
    default_t,
)
from .errors import RotsurfError, SpecError
from .gauss_map import (
    DEFAULT_ORACLE_STEP,
    coefficients_from_invariants,
    laplacian_gauss_map,
    laplacian_oracle,
)
from .profile_curves import (
    DEFAULT_UNIT_SPEED_TOL,
    admissibility,
    check_unit_speed,
    curve_from_dict,
)
from .pseudo_algebra import BIVECTOR_LABELS, norm_squared
from .rotational_surfaces import (
    mean_curvature_vector,
    scalar_invariants,
    surface_from_dict,
    surface_to_dict,
)
from .theorems import THEOREMS, stated_f, verify_theorem

COMMANDS = ("check-curve", "invariants", "sweep", "classify", "verify", "oracle-compare")
DG_COLUMNS = tuple("dG" + label for label in BIVECTOR_LABELS)

CSV_COLUMNS = {
    "check-curve": ("s", "residual"),
    "invariants": ("s", "a", "b", "c", "d", "K", "H3", "H4", "L", "M", "N"),
    "sweep": ("t", "s", "L", "M", "N", "K", "H2") + DG_COLUMNS,
    "classify": ("s", "f"),
    "verify": ("name", "passed", "measured", "threshold", "detail"),
    "oracle-compare": ("t", "s", "rel_error"),
}

CSV_HELP = """\
CSV columns (--format csv):
  check-curve     s, residual                  residual = |<x', x'> - 1|
  invariants      s, a, b, c, d, K, H3, H4, L, M, N
                  d is empty for parabolic surfaces; H3, H4 are the mean
                  curvature coefficients along e3, e4; Delta G = L e1^e2 +
                  M e2^e3 + N e2^e4
  sweep           t, s, L, M, N, K, H2, dG12, dG13, dG14, dG23, dG24, dG34
                  H2 = <H, H>; dGij are ambient coordinates of Delta G
  classify        s, f                         recovered f per sample
  verify          name, passed, measured, threshold, detail
  oracle-compare  t, s, rel_error
Floats use 17 significant digits.  See docs/csv_schema.md.

Environment:
  ROTSURF_THREADS  cap on worker threads for per-sample work (default: CPU count)
"""

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 1, 2


class InputError(Exception):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(message)
        self.path = path


# --- deterministic serialization ----------------------------------------------

def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        return "0"  # also folds -0.0
    return format(x, ".17g")


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        out = []
        for v in row:
            if v is None:
                out.append("")
            elif isinstance(v, (bool, np.bool_)):
                out.append("true" if v else "false")
            elif isinstance(v, (float, np.floating)):
                out.append(format_float(v) if math.isfinite(v) else "")
            else:
                out.append(str(v))
        writer.writerow(out)
    return buf.getvalue()


# --- helpers --------------------------------------------------------------------

def thread_count() -> int:
    raw = os.environ.get("ROTSURF_THREADS")
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"ROTSURF_THREADS must be a positive integer, got {raw!r}", "$env.ROTSURF_THREADS")
    if n < 1:
        raise InputError("ROTSURF_THREADS must be a positive integer", "$env.ROTSURF_THREADS")
    return n


def parallel_map(fn: Callable, items: Sequence) -> List:
    """Order-preserving map, threaded up to ROTSURF_THREADS workers."""
    workers = min(thread_count(), max(1, len(items)))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def load_json(path: Optional[str]):
    if path is None:
        raise InputError("--spec is required for this command", "$")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read spec file: {exc.strerror}", "$")
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", "$")


def load_surface(path):
    return surface_from_dict(load_json(path))


def load_curve(path):
    """A curve document, or the curve inside a surface document."""
    doc = load_json(path)
    if isinstance(doc, dict) and "curve" in doc:
        curve = curve_from_dict(doc["curve"], "$.curve")
        kind = doc.get("kind")
        if curve.family == "custom_analytic" and kind is not None and curve.kind is None:
            curve = curve.with_kind(kind)
        return curve
    return curve_from_dict(doc)


def _check_count(name, n, minimum):
    if n < minimum:
        raise InputError(f"{name} must be at least {minimum}", f"$args.{name}")


def _check_positive(name, x):
    if x is not None and not x > 0:
        raise InputError(f"{name} must be positive", f"$args.{name}")


def _t_grid(spec, count):
    a, b = spec.t_domain
    pad = 0.05 * (b - a)
    return np.linspace(a + pad, b - pad, count)


# --- commands -------------------------------------------------------------------

def cmd_check_curve(args):
    curve = load_curve(args.spec)
    tol = args.tol if args.tol is not None else DEFAULT_UNIT_SPEED_TOL
    grid = np.linspace(*curve.s_domain, args.s_count or 101)
    report = check_unit_speed(curve, grid, tol)
    doc = {
        "command": "check-curve",
        "family": curve.family,
        "kind": curve.kind,
        "s_domain": list(curve.s_domain),
        "tol": tol,
        "max_residual": report.max_residual,
        "unit_speed": report.passed,
    }
    ok = report.passed
    if curve.kind is not None:
        flags = [admissibility(curve, float(s)) for s in grid]
        eps = sorted({f.epsilon for f in flags if f.epsilon is not None})
        doc["positivity"] = all(f.positivity for f in flags)
        doc["nondegenerate_normal"] = all(f.nondegenerate_normal for f in flags)
        doc["epsilon"] = eps[0] if len(eps) == 1 else (None if not eps else "mixed")
        ok = ok and doc["positivity"] and doc["nondegenerate_normal"] and doc["epsilon"] != "mixed"
    doc["passed"] = ok
    doc["residuals"] = [[float(s), float(r)] for s, r in zip(grid, report.residuals)]
    rows = [(float(s), float(r)) for s, r in zip(grid, report.residuals)]
    status = EXIT_OK
    if not ok:
        where = int(np.argmax(report.residuals))
        msg = (f"$.samples: unit speed fails, max residual {report.max_residual:.3e} at "
               f"s={grid[where]:.6g} (tol {tol:g})" if not report.passed
               else "$: curve is not admissible on its domain")
        print("error: " + msg, file=sys.stderr)
        status = EXIT_INPUT
    return doc, rows, status


def _invariant_row(spec, s):
    inv = scalar_invariants(spec, float(s))
    L, M, N = coefficients_from_invariants(inv)
    return tuple(float(x) if x is not None else None for x in
                 (s, inv.a, inv.b, inv.c, inv.d, inv.K, inv.H[0], inv.H[1], L, M, N))


def cmd_invariants(args):
    spec = load_surface(args.spec)
    _check_count("s_count", args.s_count or 25, 1)
    grid = default_s_grid(spec, args.s_count or 25)
    rows = parallel_map(lambda s: _invariant_row(spec, s), list(grid))
    cols = CSV_COLUMNS["invariants"]
    doc = {"command": "invariants", "surface": surface_to_dict(spec),
           "columns": list(cols), "rows": [list(r) for r in rows]}
    return doc, rows, EXIT_OK


def _sweep_row(spec, t, s):
    sample = laplacian_gauss_map(spec, float(t), float(s))
    inv = scalar_invariants(spec, float(s))
    H = mean_curvature_vector(spec, float(s), float(t))
    return (float(t), float(s), sample.L, sample.M, sample.N, float(inv.K),
            float(norm_squared(H))) + tuple(float(x) for x in sample.deltaG_ambient)


def cmd_sweep(args):
    spec = load_surface(args.spec)
    s_count, t_count = args.s_count or 25, args.t_count or 8
    _check_count("s_count", s_count, 1)
    _check_count("t_count", t_count, 1)
    points = [(t, s) for t in _t_grid(spec, t_count) for s in default_s_grid(spec, s_count)]
    rows = parallel_map(lambda ts: _sweep_row(spec, *ts), points)
    cols = CSV_COLUMNS["sweep"]
    doc = {"command": "sweep", "surface": surface_to_dict(spec),
           "columns": list(cols), "rows": [list(r) for r in rows]}
    return doc, rows, EXIT_OK


def cmd_classify(args):
    spec = load_surface(args.spec)
    s_count = args.s_count or 25
    _check_count("s_count", s_count, 3)
    tolerances = ORACLE_TOLERANCES if args.path == "oracle" else CLOSED_FORM_TOLERANCES
    if args.tol is not None:
        tolerances = type(tolerances)(tolerances.harmonic_floor, args.tol,
                                      tolerances.c_zero, tolerances.f_constant)
    grid = default_s_grid(spec, s_count)
    result = classify(spec, grid, default_t(spec), tolerances, args.path,
                      f_reference=stated_f(spec.curve), h=args.h or DEFAULT_ORACLE_STEP)
    doc = {"command": "classify", "surface": surface_to_dict(spec), **result.to_dict()}
    return doc, result.f_samples, EXIT_OK


def _params_from_pairs(pairs):
    out = {}
    for item in pairs or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--param expects NAME=VALUE, got {item!r}", "$args.param")
        try:
            out[name] = float(value)
        except ValueError:
            raise InputError("parameter must be a number", f"$args.param.{name}")
    return out


def cmd_verify(args):
    if args.theorem is None:
        raise InputError("--theorem is required", "$args.theorem")
    params = load_json(args.spec) if args.spec else {}
    if not isinstance(params, dict):
        raise InputError("verify spec must be an object", "$")
    params = {**params, **_params_from_pairs(args.param)}
    report = verify_theorem(args.theorem, params or None, args.s_count or 25)
    doc = report.to_dict()
    rows = [(l.name, l.passed, l.measured, l.threshold, l.detail) for l in report.lines]
    return doc, rows, EXIT_OK if report.passed else EXIT_FAILED


def cmd_oracle_compare(args):
    spec = load_surface(args.spec)
    h = args.h or DEFAULT_ORACLE_STEP
    tol = args.tol if args.tol is not None else 1e-4
    s_count, t_count = args.s_count or 20, args.t_count or 1
    _check_count("s_count", s_count, 1)
    _check_count("t_count", t_count, 1)
    t_values = [default_t(spec)] if t_count == 1 else list(_t_grid(spec, t_count))
    # keep the 2h stencil inside the domain
    a, b = spec.s_domain
    pad = max(0.05 * (b - a), 2 * h)
    s_values = np.linspace(a + pad, b - pad, s_count)

    def one(ts):
        t, s = ts
        closed = laplacian_gauss_map(spec, t, s)
        fd = laplacian_oracle(spec, t, s, h)
        denom = max(np.linalg.norm(closed.deltaG_ambient), np.linalg.norm(closed.G))
        return float(t), float(s), float(np.linalg.norm(fd - closed.deltaG_ambient) / denom)

    rows = parallel_map(one, [(t, s) for t in t_values for s in s_values])
    worst = max(r[2] for r in rows)
    doc = {"command": "oracle-compare", "surface": surface_to_dict(spec), "h": h,
           "richardson_steps": [h, h / 2], "tol": tol, "max_rel_error": worst,
           "passed": worst <= tol, "rows": [list(r) for r in rows]}
    return doc, rows, EXIT_OK if worst <= tol else EXIT_FAILED


HANDLERS = {
    "check-curve": cmd_check_curve,
    "invariants": cmd_invariants,
    "sweep": cmd_sweep,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "oracle-compare": cmd_oracle_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotsurf",
        description="Rotational surfaces in E^4_2: invariants, Gauss map Laplacian and 1-type classification.",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "check-curve": "unit-speed and admissibility check of a profile curve",
        "invariants": "scalar invariants a, b, c, d, K, H, L, M, N along s",
        "sweep": "Delta G, K and <H,H> on a (t, s) grid",
        "classify": "classify the Gauss map (harmonic / first / second kind / not 1-type)",
        "verify": "numerically verify a theorem or corollary (T1..T8, C1, C2)",
        "oracle-compare": "closed-form Delta G against the finite-difference Laplacian",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name], description=helps[name], epilog=CSV_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--spec", metavar="PATH", help="surface or curve JSON spec")
        p.add_argument("--s-count", type=int, metavar="N", help="number of s samples")
        p.add_argument("--t-count", type=int, metavar="N", help="number of t samples")
        p.add_argument("--h", type=float, metavar="STEP", help="finite-difference step")
        p.add_argument("--tol", type=float, metavar="X", help="tolerance override")
        p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if name == "classify":
            p.add_argument("--path", choices=("closed", "oracle"), default="closed",
                           help="where Delta G comes from")
        if name == "verify":
            p.add_argument("--theorem", metavar="ID", choices=THEOREMS, type=str.upper,
                           help="one of " + ", ".join(THEOREMS))
            p.add_argument("--param", action="append", metavar="NAME=VALUE",
                           help="override one family constant (repeatable)")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _check_positive("h", args.h)
        _check_positive("tol", args.tol)
        if args.s_count is not None:
            _check_count("s_count", args.s_count, 1)
        doc, rows, status = HANDLERS[args.command](args)
    except InputError as exc:
        print(f"error: {exc.path}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RotsurfError, ValueError) as exc:
        print(f"error: $: {exc}", file=sys.stderr)
        return EXIT_INPUT

    text = dumps(doc) if args.format == "json" else to_csv(CSV_COLUMNS[args.command], rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))
