"""Command-line interface: ``kippen <subcommand> [options]``.

Exit codes: 0 success, 1 internal or acceptance failure, 2 invalid input.
All numbers are printed with 12 significant digits unless ``--exact``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import acceptance, analysis, kipp, pisom
from .errors import InvalidRank, InvalidSpec, KippenError
from .matcore import DEFAULT_TOL, as_matrix

BOUNDARY_COMMANDS = ("boundary", "rank-range")
SVG_SIZE = 800


class UsageError(Exception):
    """Bad arguments or input; exit code 2."""


# --- parsing -----------------------------------------------------------------

def _complex(value, name: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise UsageError(f"{name} must be a number or a [re, im] pair (got {value!r})")


def _nested_matrix(rows, name: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise UsageError(f"{name} must be a non-empty list of rows")
    return np.array([[_complex(v, name) for v in row] for row in rows],
                    dtype=np.complex128)


def spec_from_json(obj: dict):
    """Build a family spec from ``{"variant": ..., parameters...}``."""
    if not isinstance(obj, dict) or "variant" not in obj:
        raise UsageError('spec must be a JSON object with a "variant" field')
    variant = obj["variant"]

    def need(key):
        if key not in obj:
            raise UsageError(f'{variant} spec needs "{key}"')
        return obj[key]

    if variant == "Rank2Dim3":
        return pisom.Rank2Dim3(_complex(need("lambda1"), "lambda1"),
                               _complex(need("lambda2"), "lambda2"))
    if variant == "NilpotentDim4":
        return pisom.NilpotentDim4(float(need("b")))
    if variant == "NilpotentDim5":
        return pisom.NilpotentDim5(float(need("b")), float(need("t")))
    if variant == "ExceptionalDim5":
        return pisom.ExceptionalDim5(str(need("sign")), float(obj.get("phi", 0.0)))
    if variant == "RawBlocks":
        return pisom.RawBlocks(_nested_matrix(need("B"), "B"),
                               _nested_matrix(need("C"), "C"))
    raise UsageError(f"unknown variant {variant!r}")


def matrix_from_json(obj: dict) -> np.ndarray:
    """Parse ``{"n": int, "entries": [[re, im], ...]}`` (row-major)."""
    try:
        n = int(obj["n"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f'matrix JSON needs "n" and "entries" ({exc})') from None
    if n < 1 or len(entries) != n * n:
        raise UsageError(f"matrix JSON: expected {n * n} entries, got {len(entries)}")
    vals = [_complex(e, "entries") for e in entries]
    return as_matrix(np.array(vals).reshape(n, n))


def matrix_to_json(A: np.ndarray) -> dict:
    A = as_matrix(A)
    return {"n": A.shape[0],
            "entries": [[z.real, z.imag] for z in A.ravel()]}


def _random_input(obj: dict, seed: int) -> np.ndarray:
    """``{"variant": "Random", "n": .., "rank": .., "seed"?: ..}``; --seed is the fallback."""
    try:
        n, rank = int(obj["n"]), int(obj["rank"])
        seed = int(obj.get("seed", seed))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f'Random spec needs integer "n" and "rank" ({exc})') from None
    return pisom.random_partial_isometry(n, rank, seed)


def _load_input(args):
    """Returns ``(matrix, spec_or_None)``."""
    if bool(args.spec) == bool(args.matrix_file):
        raise UsageError("give exactly one of --spec or --matrix-file")
    try:
        if args.spec:
            text = args.spec
            if not text.lstrip().startswith("{"):
                text = Path(text).read_text()
            obj = json.loads(text)
            if isinstance(obj, dict) and obj.get("variant") == "Random":
                return _random_input(obj, args.seed), None
            spec = spec_from_json(obj)
            return pisom.build(spec), spec
        return matrix_from_json(json.loads(Path(args.matrix_file).read_text())), None
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None
    except OSError as exc:
        raise UsageError(f"cannot read input: {exc}") from None


# --- formatting --------------------------------------------------------------

def _num(x: float, exact: bool) -> str:
    return repr(float(x)) if exact else "%.12g" % x


def _round(obj, exact: bool):
    """Recursively round floats to 12 significant digits for JSON output."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return x if exact else float("%.12g" % x)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_round(obj.real, exact), _round(obj.imag, exact)]
    if isinstance(obj, dict):
        return {str(k): _round(v, exact) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_round(v, exact) for v in obj]
    return obj


def _dumps(obj, exact: bool) -> str:
    return json.dumps(_round(obj, exact), indent=2) + "\n"


def _csv(rows, header, exact: bool) -> str:
    lines = [",".join(header)]
    lines += [",".join(_num(v, exact) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def svg_document(points, markers=(), closed: bool = True) -> str:
    """800x800 SVG: one path for the curve, axes, and circle markers."""
    pts = np.asarray(points, dtype=np.complex128)
    allpts = np.concatenate([pts, np.asarray(markers, dtype=np.complex128)])
    if allpts.size == 0:
        allpts = np.zeros(1, dtype=np.complex128)
    lo_x, hi_x = allpts.real.min(), allpts.real.max()
    lo_y, hi_y = allpts.imag.min(), allpts.imag.max()
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-12) * 1.2  # 10% padding per side
    cx, cy = (lo_x + hi_x) / 2, (lo_y + hi_y) / 2
    x0, y0 = cx - span / 2, cy - span / 2

    def px(z):
        return ((z.real - x0) / span * SVG_SIZE, (1 - (z.imag - y0) / span) * SVG_SIZE)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" '
           f'height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
           f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>']
    ox, oy = px(0j)
    if 0 <= ox <= SVG_SIZE:
        out.append(f'<line x1="{ox:.3f}" y1="0" x2="{ox:.3f}" y2="{SVG_SIZE}" stroke="#999" stroke-width="1"/>')
    if 0 <= oy <= SVG_SIZE:
        out.append(f'<line x1="0" y1="{oy:.3f}" x2="{SVG_SIZE}" y2="{oy:.3f}" stroke="#999" stroke-width="1"/>')
    if pts.size:
        coords = [px(z) for z in pts]
        d = "M " + " L ".join(f"{x:.3f},{y:.3f}" for x, y in coords)
        if closed:
            d += " Z"
        out.append(f'<path d="{d}" fill="none" stroke="black" stroke-width="2"/>')
    for z in markers:
        x, y = px(complex(z))
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="5" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _verdict_json(rk: kipp.RankKRange) -> dict:
    out = {"k": rk.k, "kind": rk.kind}
    if isinstance(rk.verdict, kipp.SinglePoint):
        out["point"] = rk.verdict.z
    elif isinstance(rk.verdict, kipp.Polygon):
        out["vertices"] = list(rk.verdict.vertices)
    return out


def report_json(rep: analysis.RangeReport) -> dict:
    g = rep.genericity
    return {
        "partial_isometry": rep.partial_isometry,
        "generic": g.generic,
        "min_gap": g.min_gap,
        "witness_theta": g.witness_theta,
        "witness_level": g.witness_level,
        "circular": rep.circular_radius is not None,
        "radius": rep.circular_radius,
        "numerical_radius": rep.numerical_radius,
        "circles": list(rep.circles),
        "flat_portions": [
            {"direction": fp.direction, "endpoints": list(fp.endpoints),
             "support_value": fp.support_value, "eigenspace_dim": fp.eigenspace_dim}
            for fp in rep.flat_portions],
        "reducible": rep.reducibility.reducible,
        "commutant_dim": rep.reducibility.commutant_dim,
        "rank_k": {str(k): _verdict_json(v) for k, v in rep.rank_k.items()},
        "criterion": rep.criterion,
    }


# --- subcommands -------------------------------------------------------------

def cmd_construct(args) -> str:
    A, _ = _load_input(args)
    out = matrix_to_json(A)
    out["partial_isometry"] = pisom.validate_partial_isometry(A, args.tol)
    return _dumps(out, args.exact)


def cmd_validate(args) -> str:
    A, _ = _load_input(args)
    defect = float(np.linalg.norm(A @ A.conj().T @ A - A))
    return _dumps({"partial_isometry": pisom.validate_partial_isometry(A, args.tol),
                   "defect": defect}, args.exact)


def _ks(args, n: int):
    if not args.k:
        return list(range(1, n + 1))
    ks = sorted({int(x) for part in args.k for x in str(part).split(",") if x})
    bad = [k for k in ks if not 1 <= k <= n]
    if bad:
        raise UsageError(f"--k values must lie in [1, {n}] (got {bad})")
    return ks


def cmd_analyze(args) -> str:
    A, spec = _load_input(args)
    rep = analysis.analyze(A, m=args.grid, tol=args.tol, ks=_ks(args, A.shape[0]), spec=spec)
    return _dumps(report_json(rep), args.exact)


def cmd_boundary(args) -> str:
    A, _ = _load_input(args)
    curve = kipp.boundary(A, args.grid)
    if args.format == "svg":
        markers = []
        if not analysis.genericity(A, args.grid).generic:
            markers = [e for fp in analysis.flat_portions(A, args.grid, args.tol)
                       for e in fp.endpoints]
        return svg_document(curve.points, markers)
    if args.format == "json":
        return _dumps({"thetas": curve.thetas, "points": curve.points}, args.exact)
    rows = [(th, z.real, z.imag) for th, z in zip(curve.thetas, curve.points)]
    return _csv(rows, ("theta", "re", "im"), args.exact)


def cmd_sweep(args) -> str:
    A, _ = _load_input(args)
    sw = kipp.sweep(A, args.grid)
    if args.format == "json":
        return _dumps({"thetas": sw.thetas, "eigs": sw.eigs}, args.exact)
    header = ["theta"] + [f"lambda_{j + 1}" for j in range(sw.matrix_dim)]
    rows = [(th, *row) for th, row in zip(sw.thetas, sw.eigs)]
    return _csv(rows, header, args.exact)


def cmd_rank_range(args) -> str:
    A, _ = _load_input(args)
    ks = _ks(args, A.shape[0])
    if len(ks) != 1 and args.format != "json":
        raise UsageError("csv/svg output needs exactly one --k")
    results = [kipp.rank_k_range(A, k, args.grid, args.tol) for k in ks]
    if args.format == "json":
        return _dumps([_verdict_json(r) for r in results], args.exact)
    v = results[0].verdict
    pts = (v.vertices if isinstance(v, kipp.Polygon)
           else np.array([v.z]) if isinstance(v, kipp.SinglePoint)
           else np.zeros(0, dtype=np.complex128))
    if args.format == "svg":
        return svg_document(pts, markers=pts if pts.size == 1 else ())
    center = pts.mean() if pts.size else 0
    rows = [(float(np.angle(z - center)), z.real, z.imag) for z in pts]
    return _csv(rows, ("theta", "re", "im"), args.exact)


def cmd_constants(args) -> str:
    k = pisom.exceptional_constants()
    return _dumps({"alpha": k.alpha, "c_plus": k.c_plus, "c_minus": k.c_minus,
                   "t_plus": k.t_plus, "t_minus": k.t_minus}, args.exact)


def cmd_reproduce(args) -> tuple[str, int]:
    try:
        results = acceptance.run_all(args.only)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    code = 0 if all(r.passed for r in results) else 1
    if args.json:
        payload = [{"id": r.id, "title": r.title, "passed": r.passed,
                    "details": r.details} for r in results]
        return json.dumps(payload, indent=2) + "\n", code
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.id}: {r.title}")
        lines.extend(f"    {d}" for d in r.details)
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return "\n".join(lines) + "\n", code


COMMANDS = {
    "construct": cmd_construct,
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "boundary": cmd_boundary,
    "sweep": cmd_sweep,
    "rank-range": cmd_rank_range,
    "constants": cmd_constants,
    "reproduce": cmd_reproduce,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kippen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name in ("constants", "reproduce"):
            p.add_argument("--exact", action="store_true")
            if name == "reproduce":
                p.add_argument("--only", action="append",
                               help="run one check id (repeatable)")
                p.add_argument("--json", action="store_true")
            continue
        src = p.add_mutually_exclusive_group()
        src.add_argument("--spec", help="inline JSON spec or a path to one")
        src.add_argument("--matrix-file", help='JSON {"n":..,"entries":[[re,im],..]}')
        p.add_argument("--grid", type=int, default=kipp.DEFAULT_GRID)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--format", choices=("json", "csv", "svg"), default=None)
        p.add_argument("--out")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--k", action="append")
        p.add_argument("--exact", action="store_true")
    return parser


def _default_format(command: str) -> str:
    return "csv" if command in ("boundary", "sweep") else "json"


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if hasattr(args, "format"):
            args.format = args.format or _default_format(args.command)
            if args.format == "svg" and args.command not in BOUNDARY_COMMANDS:
                raise UsageError("--format svg is only valid for boundary and rank-range")
            if args.format == "csv" and args.command in ("construct", "validate", "analyze"):
                raise UsageError(f"--format csv is not valid for {args.command}")
            if args.grid < kipp.MIN_GRID:
                raise UsageError(f"--grid must be >= {kipp.MIN_GRID}")
        result = COMMANDS[args.command](args)
        text, code = result if isinstance(result, tuple) else (result, 0)
        if getattr(args, "out", None):
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return code
    except (UsageError, InvalidSpec, InvalidRank) as exc:
        _error(exc)
        return 2
    except (KippenError, ValueError) as exc:
        _error(exc)
        return 2 if isinstance(exc, ValueError) else 1
    except Exception as exc:  # noqa: BLE001 - last-resort diagnostic
        _error(f"internal: {type(exc).__name__}: {exc}")
        return 1


def _error(msg) -> None:
    text = " ".join(str(msg).split())
    sys.stderr.write(f"error: {text}\n")


if __name__ == "__main__":
    sys.exit(main())
