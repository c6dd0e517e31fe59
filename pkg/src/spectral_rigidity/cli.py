"""Command-line interface.

    spectral-rigidity analyze --n 4 --c 0,2,0
    spectral-rigidity verify --mode Lsign --n 5 --samples 10000 --seed 7
    spectral-rigidity plot --n 4 --c 0,2,0 --f 1.5 --out f0.svg

Every command builds a report {command, inputs, results, diagnostics,
version, timing_ms}.  JSON goes to stdout unless --out is given; CSV and
SVG need --out.  Output files are written once, atomically.

Exit codes: 0 ok, 1 a verify check failed, 2 invalid input,
3 boundary pattern violation, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
import warnings
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

from . import __version__
from .degenerate import enumerate_patterns, pattern_outcome
from .errors import PatternViolation, SpectralError
from .isopar import (IsoparametricFamily, closed_form_array, cot_sum_identity,
                     curvature_profile, is_equality_case, minimal_theta, profile_arrays,
                     sin_product_identity, theta_grid)
from .pointwise import (L_batch, assertion_scan, gradient_residual,
                        lambda_gradient_closed_form, lambda_gradient_linear_solve)
from .poly import DEFAULT_TOL, cauchy_bound, critical_points, eval_poly, local_extrema
from .sampling import distinct_spectra, gradient_vectors, rng
from .spectrum import (boundary_pattern, build_model, char_poly_at, classify_point,
                       feasible_interval, level_of, spectrum_at)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PATTERN, EXIT_IO = 0, 1, 2, 3, 4
COMMANDS = ("analyze", "spectrum", "degenerate", "verify", "isopar", "identities", "plot")


class InputError(Exception):
    pass


class VerifyFailed(Exception):
    pass


# -- serialization ---------------------------------------------------------------

def fmt_float(x: float) -> str:
    if math.isnan(x):
        raise InputError("NaN in report")
    if math.isinf(x):
        return '"+inf"' if x > 0 else '"-inf"'
    return "%.17g" % x


def to_json(obj, indent: int = 0) -> str:
    """JSON with every float printed to 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + to_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse_float(text) -> float:
    """Inverse of fmt_float for report values, including "+inf"/"-inf"."""
    if isinstance(text, (int, float)):
        return float(text)
    if text in ("+inf", "-inf"):
        return math.inf if text == "+inf" else -math.inf
    return float(text)


def _csv_cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v)).strip('"')
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    return str(v)


def to_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    fields = list(records[0].keys()) if records else []
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for rec in records:
        w.writerow([_csv_cell(rec[k]) for k in fields])
    return buf.getvalue()


def write_atomic(path: Path, text: str) -> None:
    """Write to a temporary file beside `path`, then rename over it."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".",
                               prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- input parsing ------------------------------------------------------------------

def float_list(text: str) -> list[float]:
    try:
        vals = [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError("values must be finite")
    return vals


def finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("value must be finite")
    return v


def positive_float(text: str) -> float:
    v = finite_float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return v


def uint(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("value must be non-negative")
    return v


def _model_args(p: argparse.ArgumentParser, need_c: bool = True) -> None:
    p.add_argument("--n", type=uint, required=True, help="number of eigenvalues")
    p.add_argument("--c", type=float_list, required=need_c,
                   help="power sums c_1..c_{n-1}, comma-separated")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="output file (default: JSON on stdout)")
    common.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    common.add_argument("--tol", type=positive_float, default=DEFAULT_TOL)
    common.add_argument("--seed", type=uint, default=0,
                        help="seed for numpy's PCG64 generator")

    parser = argparse.ArgumentParser(prog="spectral-rigidity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--job", type=Path, help="read the job from a JSON document")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("analyze", parents=[common], help="feasible interval and boundary spectra")
    _model_args(p)

    p = sub.add_parser("spectrum", parents=[common], help="spectrum for given values of f")
    _model_args(p)
    p.add_argument("--f", type=float_list, required=True)
    p.add_argument("--eps", type=positive_float, default=None,
                   help="width of the boundary bands for region labels")

    p = sub.add_parser("degenerate", parents=[common], help="spectra with repeated eigenvalues")
    _model_args(p)

    p = sub.add_parser("verify", parents=[common], help="sampled property checks")
    p.add_argument("--mode", choices=("Lsign", "gradients", "assertion"), required=True)
    _model_args(p, need_c=False)
    p.add_argument("--samples", type=uint, default=1000)
    p.add_argument("--end", choices=("lower", "upper"), default="upper")
    p.add_argument("--eps", type=positive_float, default=1e-2)
    p.add_argument("--scan-samples", type=uint, default=50)

    p = sub.add_parser("isopar", parents=[common], help="curvature sweep of one family")
    p.add_argument("--g", type=uint, required=True)
    p.add_argument("--m1", type=uint, required=True)
    p.add_argument("--m2", type=uint, default=None)
    p.add_argument("--points", type=uint, default=10_000)

    p = sub.add_parser("identities", parents=[common], help="trigonometric identity checks")
    p.add_argument("--n-max", type=uint, default=12)
    p.add_argument("--samples", type=uint, default=1000)

    p = sub.add_parser("plot", parents=[common], help="SVG of F0 with level lines")
    _model_args(p)
    p.add_argument("--f", type=float_list, default=[])
    p.add_argument("--samples", type=uint, default=400)
    return parser


def job_to_argv(path: Path) -> list[str]:
    """Translate a job document into command-line arguments.

    {"command": "analyze", "parameters": {"n": 4, "c": [0, 2, 0]},
     "output": {"path": "r.json", "format": "json"}}
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise OSError(f"cannot read job file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"job file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("command") not in COMMANDS:
        raise InputError(f"job must name a command among {COMMANDS}")
    argv = [doc["command"]]
    params = doc.get("parameters", {})
    if not isinstance(params, dict):
        raise InputError("job parameters must be an object")
    for key, val in params.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(val, list):
            val = ",".join(repr(float(v)) for v in val)
        argv += [flag, str(val)]
    out = doc.get("output") or {}
    if "path" in out:
        argv += ["--out", str(out["path"])]
    if "format" in out:
        argv += ["--format", str(out["format"])]
    return argv


# -- commands -----------------------------------------------------------------------------

def _model(args):
    if args.n < 2:
        raise InputError("n must be at least 2")
    try:
        return build_model(args.n, args.c)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _spectrum_json(spec) -> list[dict]:
    return [{"value": v, "multiplicity": m} for v, m in spec.entries]


def run_analyze(args):
    model = _model(args)
    interval = feasible_interval(model, args.tol)
    crit = critical_points(model.F0, args.tol)
    maxima, minima = local_extrema(model.F0, args.tol)
    kinds = {x: "max" for x, _ in maxima} | {x: "min" for x, _ in minima}
    crit_rows = [{"x": x, "multiplicity": m, "F0": eval_poly(model.F0, x),
                  "kind": kinds.get(x, "inflection")} for x, m in crit]
    results = {
        "F0_coefficients": list(model.F0.coeffs),
        "d": list(model.d),
        "C": model.C,
        "critical_points": crit_rows,
        "a_prime": interval.a_prime, "b_prime": interval.b_prime,
        "a": interval.a, "b": interval.b,
        "boundary": {},
    }
    for end, val in (("lower", interval.a), ("upper", interval.b)):
        if not math.isfinite(val):
            results["boundary"][end] = None
            continue
        bp = boundary_pattern(model, end, args.tol, interval, strict=False)
        results["boundary"][end] = {
            "f": bp.f, "spectrum": _spectrum_json(bp.spectrum),
            "doubled_pairs": [[i + 1, j + 1] for i, j in bp.doubled_pairs],
            "pattern_valid": bp.valid, "problems": list(bp.problems),
        }
        if not bp.valid:
            raise PatternViolation(f"{end} end: " + "; ".join(bp.problems))
    return results, crit_rows


def run_spectrum(args):
    model = _model(args)
    interval = feasible_interval(model, args.tol)
    rows, records = [], []
    for f in args.f:
        spec = spectrum_at(model, f, args.tol, interval)
        row = {"f": f, "spectrum": _spectrum_json(spec)}
        if args.eps is not None and interval.finite:
            coarse, fine = classify_point(model, interval, f, args.eps, args.tol)
            row["region"] = coarse.value if fine is None else fine.value
        rows.append(row)
        records.append({"f": f, "eigenvalues": spec.expanded()})
    return {"a": interval.a, "b": interval.b, "spectra": rows}, records


def run_degenerate(args):
    model = _model(args)
    rows = []
    for pat in enumerate_patterns(model.n):
        sol, reason = pattern_outcome(model, pat, args.tol)
        rows.append({
            "pattern": str(pat),
            "f": sol.f_value if sol else None,
            "spectrum": _spectrum_json(sol.spectrum) if sol else None,
            "reason": reason,
        })
    solved = [r for r in rows if r["f"] is not None]
    records = [{"pattern": r["pattern"], "f": r["f"] if r["f"] is not None else "",
                "reason": r["reason"]} for r in rows]
    return {"patterns": rows, "solutions": len(solved), "rejected": len(rows) - len(solved)}, records


def _verify_lsign(args, gen):
    if args.n < 3:
        raise InputError("Lsign needs n >= 3")
    lams = distinct_spectra(gen, args.n, args.samples)
    Ls = L_batch(lams) if len(lams) else np.empty((0, args.n))
    bad = int(np.sum(np.any(Ls >= 0, axis=1)))
    worst = float(Ls.max()) if Ls.size else -math.inf
    records = [{"sample": k, "max_L": float(row.max())} for k, row in enumerate(Ls)]
    return {"samples": args.samples, "failures": bad, "max_L": worst}, records, bad == 0


def _verify_gradients(args, gen):
    if args.n < 2:
        raise InputError("gradients needs n >= 2")
    lams = distinct_spectra(gen, args.n, args.samples)
    grads = gradient_vectors(gen, args.n, args.samples)
    worst_rel = worst_res = 0.0
    records = []
    for k, (lam, fg) in enumerate(zip(lams, grads)):
        closed = lambda_gradient_closed_form(lam, fg)
        solved = lambda_gradient_linear_solve(lam, fg, args.tol)
        rel = float(np.max(np.abs(closed - solved)) / max(np.max(np.abs(closed)), 1e-300))
        res = gradient_residual(lam, solved, fg, scaled=True)
        worst_rel, worst_res = max(worst_rel, rel), max(worst_res, res)
        records.append({"sample": k, "relative_discrepancy": rel, "residual": res})
    failures = sum(1 for r in records if r["relative_discrepancy"] >= 1e-9 or r["residual"] >= 1e-9)
    return ({"samples": args.samples, "failures": failures,
             "max_relative_discrepancy": worst_rel, "max_residual": worst_res},
            records, failures == 0)


def _verify_assertion(args):
    model = _model(args)
    rep = assertion_scan(model, args.end, args.eps, args.scan_samples, args.tol)
    indices, records = [], []
    for r in rep.indices:
        indices.append({
            "index": r.index + 1, "doubled": r.doubled, "behaviour": r.behaviour,
            "last_value": r.values[-1], "bound": r.bound,
            "extrapolated": r.extrapolated, "closed_form": r.closed_form,
            "extrapolation_error": r.extrapolation_error,
        })
    for h, f, row in zip(rep.h_samples, rep.f_samples, zip(*[r.values for r in rep.indices])):
        rec = {"h": h, "f": f}
        rec.update({f"signed_u{p + 1}": v for p, v in enumerate(row)})
        records.append(rec)
    ok = rep.ok()
    results = {"end": rep.end, "endpoint": rep.endpoint, "eps": rep.eps,
               "boundary": rep.boundary,
               "doubled_pairs": [[i + 1, j + 1] for i, j in rep.doubled_pairs],
               "indices": indices, "A1_candidate": rep.A1_candidate,
               "empirical_bound": rep.empirical_bound, "passed": ok}
    return results, records, ok


def run_verify(args):
    gen = rng(args.seed)
    if args.mode == "Lsign":
        results, records, ok = _verify_lsign(args, gen)
    elif args.mode == "gradients":
        results, records, ok = _verify_gradients(args, gen)
    else:
        results, records, ok = _verify_assertion(args)
    results["mode"] = args.mode
    results["passed"] = ok
    return results, records


def run_isopar(args):
    try:
        fam = IsoparametricFamily(args.g, args.m1, args.m2 if args.m2 is not None else args.m1)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.points < 1:
        raise InputError("points must be positive")
    thetas = theta_grid(fam, args.points)
    H, S, R = profile_arrays(fam, thetas)
    closed = closed_form_array(fam, thetas)
    residual = np.abs(closed - R) / np.maximum(1.0, np.abs(R))
    k = int(np.argmin(R))
    th_star = minimal_theta(fam)
    prof = curvature_profile(fam, th_star)
    results = {
        "family": {"g": fam.g, "m1": fam.m1, "m2": fam.m2, "n": fam.n},
        "grid_points": len(thetas),
        "min_R_M": float(R[k]), "theta_at_min": float(thetas[k]),
        "max_closed_form_residual": float(residual.max()),
        "equality_case": is_equality_case(fam),
        "minimal_theta": th_star, "H_at_minimal": prof.H, "S_at_minimal": prof.S,
        "S_expected": float((fam.g - 1) * fam.n),
    }
    records = [{"theta": float(t), "H": float(h), "S": float(s), "R_M": float(r),
                "R_closed_form": float(c)} for t, h, s, r, c in zip(thetas, H, S, R, closed)]
    return results, records


def run_identities(args):
    if args.n_max < 2:
        raise InputError("n-max must be at least 2")
    gen = rng(args.seed)
    worst = {"cot_sum": 0.0, "cot_square_sum": 0.0, "sin_product": 0.0}
    records = []
    for n in range(2, args.n_max + 1):
        # angles in (0, pi/n), kept 1e-3 of the interval away from its ends
        for u in gen.uniform(1e-3, 1 - 1e-3, size=args.samples):
            theta = float(u) * math.pi / n
            (s1, r1), (s2, r2) = cot_sum_identity(n, theta)
            p, q = sin_product_identity(n, theta)
            e1 = abs(s1 - r1) / max(1.0, abs(r1))
            e2 = abs(s2 - r2) / max(1.0, abs(r2))
            e3 = abs(p - q)
            worst["cot_sum"] = max(worst["cot_sum"], e1)
            worst["cot_square_sum"] = max(worst["cot_square_sum"], e2)
            worst["sin_product"] = max(worst["sin_product"], e3)
            records.append({"n": n, "theta": theta, "cot_sum_error": e1,
                            "cot_square_sum_error": e2, "sin_product_error": e3})
    return {"max_errors": worst, "n_max": args.n_max, "samples_per_n": args.samples}, records


def plot_extent(model, interval) -> float:
    """Half-width B of the x-range: a root bound of F at a finite endpoint,
    widened to cover every critical point."""
    ends = [f for f in (interval.b, interval.a) if math.isfinite(f)]
    P = char_poly_at(model, ends[0]) if ends else model.F0
    B = cauchy_bound(P)
    if model.F0.degree >= 2:
        crit = critical_points(model.F0).values
        if crit:
            B = max(B, 1.1 * max(abs(x) for x in crit))
    return B


def render_svg(model, interval, f_marks, samples: int, width: int = 640, height: int = 480):
    """SVG of F0 over [-B, B] plus the sampled points."""
    B = plot_extent(model, interval)
    xs = np.linspace(-B, B, samples)
    ys = np.array([eval_poly(model.F0, float(x)) for x in xs])

    levels = [("f", f, level_of(model, f)) for f in f_marks]
    for name, f in (("a", interval.a), ("b", interval.b)):
        if math.isfinite(f):
            levels.append((name, f, level_of(model, f)))
    crit = list(critical_points(model.F0).roots) if model.F0.degree >= 2 else []

    y_lo = min([ys.min()] + [y for _, _, y in levels])
    y_hi = max([ys.max()] + [y for _, _, y in levels])
    if y_hi - y_lo < 1e-12:
        y_lo, y_hi = y_lo - 1, y_hi + 1
    margin = 40

    def sx(x):
        return margin + (x + B) / (2 * B) * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", version="1.1",
                     width=str(width), height=str(height),
                     viewBox=f"0 0 {width} {height}")
    ET.SubElement(svg, "title").text = f"F0 for n={model.n}, c={list(model.c)}"
    ET.SubElement(svg, "rect", x="0", y="0", width=str(width), height=str(height), fill="white")
    axes = ET.SubElement(svg, "g", stroke="#888", attrib={"stroke-width": "1"})
    if y_lo <= 0 <= y_hi:
        ET.SubElement(axes, "line", x1=f"{margin}", y1=f"{sy(0):.3f}",
                      x2=f"{width - margin}", y2=f"{sy(0):.3f}")
    ET.SubElement(axes, "line", x1=f"{sx(0):.3f}", y1=f"{margin}",
                  x2=f"{sx(0):.3f}", y2=f"{height - margin}")

    pts = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in zip(xs, ys))
    ET.SubElement(svg, "polyline", points=pts, fill="none", stroke="#1f4e9c",
                  attrib={"stroke-width": "2"})
    colours = {"a": "#2a8f3c", "b": "#c0392b", "f": "#8e44ad"}
    for name, f, y in levels:
        g = ET.SubElement(svg, "g", stroke=colours[name], attrib={"stroke-dasharray": "6,4"})
        ET.SubElement(g, "line", x1=f"{margin}", y1=f"{sy(y):.3f}",
                      x2=f"{width - margin}", y2=f"{sy(y):.3f}")
        label = ET.SubElement(svg, "text", x=f"{width - margin + 2}", y=f"{sy(y):.3f}",
                              fill=colours[name], attrib={"font-size": "11"})
        label.text = f"{name}={f:.6g}"
    for x, _ in crit:
        ET.SubElement(svg, "circle", cx=f"{sx(x):.3f}", cy=f"{sy(eval_poly(model.F0, x)):.3f}",
                      r="4", fill="black")
    text = ET.tostring(svg, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + text + "\n", xs, ys, levels, crit


def run_plot(args):
    model = _model(args)
    if args.samples < 2:
        raise InputError("samples must be at least 2")
    interval = feasible_interval(model, args.tol)
    svg, xs, ys, levels, crit = render_svg(model, interval, args.f, args.samples)
    records = [{"x": float(x), "F0": float(y)} for x, y in zip(xs, ys)]
    results = {"x_range": [float(xs[0]), float(xs[-1])],
               "levels": [{"name": n, "f": f, "height": y} for n, f, y in levels],
               "critical_points": [{"x": x, "multiplicity": m} for x, m in crit],
               "samples": len(xs)}
    return results, records, svg


RUNNERS = {
    "analyze": run_analyze, "spectrum": run_spectrum, "degenerate": run_degenerate,
    "verify": run_verify, "isopar": run_isopar, "identities": run_identities,
}


def _inputs(args) -> dict:
    skip = {"out", "format", "job", "command"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None:
            continue
        out[k] = str(v) if isinstance(v, Path) else v
    return out


def execute(args) -> tuple[dict, list[dict], str | None]:
    """Run one command; returns (report, records, svg text or None)."""
    start = time.perf_counter()
    svg = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.command == "plot":
            results, records, svg = run_plot(args)
        else:
            results, records = RUNNERS[args.command](args)
    report = {
        "command": args.command,
        "inputs": _inputs(args),
        "results": results,
        "diagnostics": [str(w.message) for w in caught],
        "version": __version__,
        "timing_ms": (time.perf_counter() - start) * 1e3,
    }
    return report, records, svg


def render(args, report, records, svg) -> dict[Path, str]:
    """Map of output path -> text; validated before anything is written."""
    fmt = args.format
    if fmt == "svg" and args.command != "plot":
        raise InputError("--format svg is only available for plot")
    if fmt in ("csv", "svg") and args.out is None:
        raise InputError(f"--format {fmt} needs --out")
    if args.command == "plot" and args.out is not None and fmt != "json":
        out = Path(args.out)
        files = {out: svg if fmt == "svg" else to_csv(records)}
        if fmt == "svg":
            files[out.with_suffix(".csv")] = to_csv(records)
        return files
    if fmt == "csv":
        return {Path(args.out): to_csv(records)}
    text = to_json(report) + "\n"
    return {Path(args.out): text} if args.out is not None else {Path("-"): text}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        if args.job is not None:
            if args.command is not None:
                raise InputError("--job cannot be combined with a command")
            args = parser.parse_args(job_to_argv(args.job))
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_INPUT
        report, records, svg = execute(args)
        files = render(args, report, records, svg)
    except SystemExit as exc:                      # argparse errors and --help
        return int(exc.code or 0) if isinstance(exc.code, int) else EXIT_INPUT
    except PatternViolation as exc:
        print(f"error: pattern violation: {exc}", file=sys.stderr)
        return EXIT_PATTERN
    except (InputError, SpectralError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        for path, text in files.items():
            if str(path) == "-":
                sys.stdout.write(text)
            else:
                write_atomic(path, text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.command == "verify" and not report["results"]["passed"]:
        return EXIT_FAIL
    return EXIT_OK
