"""Command line interface: ``hypcurve render|classify|reduce|translate|contract``.

Documents are JSON. Infinite bounds are written as the strings ``"inf"`` and
``"-inf"``. Exit codes: 0 success, 2 invalid input, 3 empty curve space,
4 undecided within the search budget.
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
from pathlib import Path

import numpy as np

from . import __version__
from .classify import Verdict, is_graph_in_M, region_R, region_contains, valid_turnings, voidness_report
from .curves import (
    CurvatureInterval,
    IntrinsicCurve,
    SampledCurve,
    integrate,
    total_turning,
    trace_curvature,
)
from .homotopy import (
    HomotopyError,
    contract_contained,
    contract_disjoint,
    curve_to_profile,
    profile_family_curves,
    reparam_by_argument,
)
from .models import (
    BASE_TANGENT,
    Isometry,
    ModelDomainError,
    ModelId,
    ModelPoint,
    ModelVector,
    chart_arrays,
    convert_vector,
    hyperboloid_distance,
    to_hyperboloid,
)
from .transform import (
    IntervalClass,
    RegularityError,
    classify_interval,
    map_turning,
    translate_refined,
    reduce,
    translated_curvature,
)

FORMAT_VERSION = 1
TOL_ENV = "HYPCURVE_TOL"
EXIT_OK, EXIT_INVALID, EXIT_EMPTY, EXIT_UNKNOWN = 0, 2, 3, 4
REPORT_DIGITS = 12
# interpolation target for translated intrinsic data
TRANSLATE_TOL = 1e-7


class InputError(ValueError):
    """Malformed or inconsistent input document."""


def default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return 1e-8
    try:
        tol = float(raw)
    except ValueError:
        raise InputError(f"{TOL_ENV} must be a number, got {raw!r}") from None
    if not tol > 0:
        raise InputError(f"{TOL_ENV} must be positive")
    return tol


# ---------------------------------------------------------------------------
# Serialization


def _encode_real(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(x)


def _decode_real(x) -> float:
    if isinstance(x, str):
        if x in ("inf", "+inf"):
            return math.inf
        if x == "-inf":
            return -math.inf
        raise InputError(f"unexpected string {x!r} where a number was expected")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InputError(f"expected a number, got {x!r}")
    return float(x)


def _round(x, digits: int = REPORT_DIGITS):
    """Round floats to ``digits`` significant digits so reports are stable across platforms."""
    if isinstance(x, dict):
        return {k: _round(v, digits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v, digits) for v in x]
    if isinstance(x, np.ndarray):
        return _round(x.tolist(), digits)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isinf(x):
            return _encode_real(x)
        if x == 0 or math.isnan(x):
            return 0.0 if x == 0 else None
        return float(f"{x:.{digits}g}")
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def atomic_write(path: Path, data: str | bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": "\n"})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def curve_to_doc(c: IntrinsicCurve, model: ModelId = ModelId.DISK) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "curve",
        "model": model.value,
        "bounds": [_encode_real(c.bounds.lo), _encode_real(c.bounds.hi)],
        "frame0": [float(v) for v in c.frame0.m.ravel()],
        "grid": [float(v) for v in c.grid],
        "sigma_hat": [float(v) for v in c.sigma_hat],
        "kappa_hat": [float(v) for v in c.kappa_hat],
    }


def _require(doc: dict, key: str):
    if key not in doc:
        raise InputError(f"missing field {key!r}")
    return doc[key]


def _check_version(doc: dict) -> None:
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    if _require(doc, "format_version") != FORMAT_VERSION:
        raise InputError(f"unsupported format_version {doc['format_version']!r}")


def _bounds(raw) -> CurvatureInterval:
    if not isinstance(raw, list) or len(raw) != 2:
        raise InputError("bounds must be a two-element list")
    try:
        return CurvatureInterval(_decode_real(raw[0]), _decode_real(raw[1]))
    except ValueError as e:
        raise InputError(str(e)) from None


def _reals(raw, name: str) -> np.ndarray:
    if not isinstance(raw, list):
        raise InputError(f"{name} must be a list")
    return np.array([_decode_real(v) for v in raw], dtype=float)


def curve_from_doc(doc: dict) -> IntrinsicCurve:
    _check_version(doc)
    frame = _reals(_require(doc, "frame0"), "frame0")
    if frame.size != 9:
        raise InputError("frame0 needs 9 entries")
    grid = _reals(_require(doc, "grid"), "grid")
    sh = _reals(_require(doc, "sigma_hat"), "sigma_hat")
    kh = _reals(_require(doc, "kappa_hat"), "kappa_hat")
    if not (grid.size == sh.size == kh.size):
        raise InputError("grid, sigma_hat and kappa_hat must have equal length")
    try:
        return IntrinsicCurve(Isometry(frame.reshape(3, 3)), grid, sh, kh, _bounds(_require(doc, "bounds")))
    except ValueError as e:
        raise InputError(f"invalid curve: {e}") from None


def vector_to_doc(v: ModelVector) -> dict:
    return {"model": v.model.value, "point": list(v.base.coords), "dir": list(v.dir)}


def vector_from_doc(raw, tol: float) -> ModelVector:
    if not isinstance(raw, dict):
        raise InputError("vectors must be objects with model, point, dir")
    try:
        model = ModelId.parse(_require(raw, "model"))
        v = ModelVector(ModelPoint(model, tuple(_reals(_require(raw, "point"), "point"))), tuple(_reals(_require(raw, "dir"), "dir")))
    except (ValueError, KeyError) as e:
        raise InputError(f"invalid vector: {e}") from None
    if not v.is_unit(tol):
        raise InputError(f"vector is not unit (norm {v.norm():.12g})")
    # accepted within the user tolerance; downstream code expects exact units
    return v.normalized()


class Problem:
    def __init__(self, bounds: CurvatureInterval, u: ModelVector, v: ModelVector, turning: float | None, ubar: ModelVector | None):
        self.bounds, self.u, self.v, self.turning, self.ubar = bounds, u, v, turning, ubar

    @classmethod
    def from_doc(cls, doc: dict, tol: float) -> "Problem":
        _check_version(doc)
        turning = doc.get("turning")
        ubar = doc.get("ubar")
        return cls(
            _bounds(_require(doc, "bounds")),
            vector_from_doc(_require(doc, "u"), tol),
            vector_from_doc(_require(doc, "v"), tol),
            None if turning is None else _decode_real(turning),
            None if ubar is None else vector_from_doc(ubar, tol),
        )

    def to_doc(self) -> dict:
        doc = {
            "format_version": FORMAT_VERSION,
            "kind": "problem",
            "bounds": [_encode_real(self.bounds.lo), _encode_real(self.bounds.hi)],
            "u": vector_to_doc(self.u),
            "v": vector_to_doc(self.v),
        }
        if self.turning is not None:
            doc["turning"] = self.turning
        return doc


def load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


# ---------------------------------------------------------------------------
# Rendering

VIEW = 1000.0
MARGIN = 50.0
DISK_RADIUS = 450.0


def _fmt(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


class _Viewport:
    """Affine chart-to-SVG map with the y axis flipped."""

    def __init__(self, model: ModelId, z: np.ndarray):
        self.model = model
        if model is ModelId.DISK:
            self.scale, self.cx, self.cy = DISK_RADIUS, 0.0, 0.0
            return
        x, y = z.real, z.imag
        if model is ModelId.MERCATOR:
            x = np.concatenate([x, [0.0, math.pi]])
        else:
            y = np.concatenate([y, [0.0]])
        span = max(float(np.ptp(x)), float(np.ptp(y)), 1e-9)
        self.scale = (VIEW - 2 * MARGIN) / span
        self.cx = 0.5 * (float(x.min()) + float(x.max()))
        self.cy = 0.5 * (float(y.min()) + float(y.max()))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return VIEW / 2 + self.scale * (z.real - self.cx), VIEW / 2 - self.scale * (z.imag - self.cy)


class Trace:
    """Points of a curve on the hyperboloid, with unit normals when known."""

    def __init__(self, points: np.ndarray, normals: np.ndarray | None = None):
        self.points = np.asarray(points, dtype=float)
        self.normals = normals

    @classmethod
    def of(cls, sc: SampledCurve) -> "Trace":
        return cls(sc.points, sc.normals)


def _as_trace(c) -> Trace:
    return c if isinstance(c, Trace) else Trace.of(c)


def render_svg(curves, model: ModelId, rays: bool = True) -> str:
    """SVG drawing of one or more curves (``SampledCurve`` or ``Trace``) in a planar chart."""
    if model is ModelId.HYPERBOLOID:
        raise InputError("rendering needs a two-dimensional chart: disk, halfplane or mercator")
    traces = [_as_trace(c) for c in curves]
    charts = [chart_arrays(tr.points, None, model)[0] for tr in traces]
    view = _Viewport(model, np.concatenate(charts))
    out = io.StringIO()
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(VIEW)}" height="{int(VIEW)}" viewBox="0 0 {int(VIEW)} {int(VIEW)}">\n')
    out.write('<rect width="100%" height="100%" fill="white"/>\n')
    if model is ModelId.DISK:
        out.write(f'<circle class="boundary" cx="500.000" cy="500.000" r="{_fmt(DISK_RADIUS)}" fill="none" stroke="black"/>\n')
    elif model is ModelId.HALF_PLANE:
        _, y0 = view(0j)
        out.write(f'<line class="boundary" x1="0.000" y1="{_fmt(float(y0))}" x2="{_fmt(VIEW)}" y2="{_fmt(float(y0))}" stroke="black"/>\n')
    else:
        for edge in (0.0, math.pi):
            x0, _ = view(complex(edge, 0.0))
            out.write(f'<line class="boundary" x1="{_fmt(float(x0))}" y1="0.000" x2="{_fmt(float(x0))}" y2="{_fmt(VIEW)}" stroke="black"/>\n')
    for z in charts:
        X, Y = view(z)
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(X, Y))
        out.write(f'<polyline class="curve" fill="none" stroke="blue" points="{pts}"/>\n')
    if rays and model is ModelId.DISK:
        # limits of the normal geodesics at both ends: green on the left, red on the right
        for tr in traces:
            if tr.normals is None:
                continue
            for i in (0, len(tr.points) - 1):
                for sign, colour in ((1, "green"), (-1, "red")):
                    light = tr.points[i] + sign * tr.normals[i]
                    ang = math.atan2(light[2], light[1])
                    X, Y = view(complex(math.cos(ang), math.sin(ang)))
                    out.write(f'<circle class="alpha" cx="{_fmt(float(X))}" cy="{_fmt(float(Y))}" r="4.000" fill="{colour}"/>\n')
    out.write("</svg>\n")
    return out.getvalue()


def trace_csv(sc: SampledCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "x0", "x1", "x2", "kappa", "sigma"])
    for t, p, k, s in zip(sc.params, sc.points, sc.curvatures, sc.speed):
        w.writerow([repr(float(v)) for v in (t, p[0], p[1], p[2], k, s)])
    return buf.getvalue()


def read_trace(path) -> Trace:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    if not rows or rows[0][:4] != ["t", "x0", "x1", "x2"]:
        raise InputError(f"{path} is not a curve trace")
    try:
        pts = np.array([[float(v) for v in r[1:4]] for r in rows[1:]])
    except (ValueError, IndexError):
        raise InputError(f"{path} has malformed rows") from None
    if pts.shape[0] < 2:
        raise InputError(f"{path} needs at least two samples")
    return Trace(pts)


def _write_trace_or_svg(path: Path, sc: SampledCurve, model: ModelId) -> None:
    if path.suffix.lower() == ".csv":
        atomic_write(path, trace_csv(sc))
    else:
        atomic_write(path, render_svg([sc], model))


# ---------------------------------------------------------------------------
# Commands


def _model(args, doc: dict | None = None) -> ModelId:
    name = args.model or (doc or {}).get("model") or "disk"
    try:
        return ModelId.parse(name)
    except ValueError as e:
        raise InputError(str(e)) from None


def _override_bounds(args, b: CurvatureInterval) -> CurvatureInterval:
    lo = b.lo if args.kappa1 is None else args.kappa1
    hi = b.hi if args.kappa2 is None else args.kappa2
    try:
        return CurvatureInterval(lo, hi)
    except ValueError as e:
        raise InputError(str(e)) from None


def cmd_render(args) -> int:
    src = args.inputs[0]
    if str(src).lower().endswith(".csv"):
        if str(args.out).lower().endswith(".csv"):
            raise InputError("a trace can only be rendered to SVG")
        atomic_write(Path(args.out), render_svg([read_trace(src)], _model(args)))
        return EXIT_OK
    doc = load_json(src)
    sc = integrate(curve_from_doc(doc), samples=args.samples)
    _write_trace_or_svg(Path(args.out), sc, _model(args, doc))
    return EXIT_OK


def _sibling(out: Path, tag: str, suffix: str = ".json") -> Path:
    return out.with_name(f"{out.stem}.{tag}{suffix}")


def cmd_classify(args) -> int:
    tol = default_tolerance()
    prob = Problem.from_doc(load_json(args.inputs[0]), tol)
    b = _override_bounds(args, prob.bounds)
    tc = valid_turnings(prob.u, prob.v)
    tau = args.turning if args.turning is not None else prob.turning
    if tau is None:
        # principal representative in (-pi, pi]
        tau = tc.base if tc.base <= math.pi else tc.base - 2 * math.pi
    try:
        index = tc.index_of(tau)
    except ValueError as e:
        raise InputError(str(e)) from None
    rel = classify_interval(b)
    report = {
        "format_version": FORMAT_VERSION,
        "kind": "classify_report",
        "bounds": [_encode_real(b.lo), _encode_real(b.hi)],
        "relation": rel.value,
        "turning": tau,
        "residue": tc.base,
        "index": index,
    }
    if rel in (IntervalClass.CONTAINED, IntervalClass.MINUS_ONE_ONE):
        R = region_R(b.lo, b.hi, prob.u)
        report["endpoint_in_region"] = region_contains(R, to_hyperboloid(prob.v.base))
        report["endpoint_in_region_closure"] = region_contains(R, to_hyperboloid(prob.v.base), closed=True)
    res = voidness_report(b, prob.u, prob.v, tau, budget=args.budget)
    report["verdict"] = res.verdict.value
    report["reason"] = res.reason
    report["certificate"] = {k: v for k, v in res.certificate.items()}
    out = Path(args.out)
    if res.witness is not None:
        if isinstance(res.witness, IntrinsicCurve):
            wpath = _sibling(out, "witness")
            atomic_write(wpath, dumps(curve_to_doc(res.witness, ModelId.HALF_PLANE)))
            sc = integrate(res.witness, samples=args.samples)
        else:
            wpath = _sibling(out, "witness", ".csv")
            sc = res.witness
            atomic_write(wpath, trace_csv(sc))
        report["witness"] = wpath.name
        report["witness_turning"] = total_turning(sc)
        report["witness_is_graph"] = is_graph_in_M(sc)
    atomic_write(out, dumps(_round(report)))
    return {Verdict.NONEMPTY: EXIT_OK, Verdict.EMPTY: EXIT_EMPTY, Verdict.UNKNOWN: EXIT_UNKNOWN}[res.verdict]


def cmd_reduce(args) -> int:
    tol = default_tolerance()
    prob = Problem.from_doc(load_json(args.inputs[0]), tol)
    b = _override_bounds(args, prob.bounds)
    if classify_interval(b) is IntervalClass.MINUS_ONE_ONE:
        raise InputError("the interval (-1, 1) cannot be reduced")
    ubar = prob.ubar or convert_vector(BASE_TANGENT, ModelId.HALF_PLANE)
    r = reduce(b, prob.u, prob.v, ubar)
    tau = args.turning if args.turning is not None else prob.turning
    out = Path(args.out)
    reduced = Problem(r.reduced_bounds, ubar, r.vbar, None if tau is None else map_turning(r, tau), None)
    rdoc = _round({"format_version": FORMAT_VERSION, "kind": "recipe", **r.to_dict()})
    rpath = _sibling(out, "problem")
    rdoc["reduced_problem"] = rpath.name
    atomic_write(out, dumps(rdoc))
    atomic_write(rpath, dumps(_round(reduced.to_doc())))
    return EXIT_OK


def _interior_params(c: IntrinsicCurve, per_cell: int = 2) -> np.ndarray:
    nodes = np.unique(c.grid)
    ts = []
    for a, b in zip(nodes[:-1], nodes[1:]):
        ts.extend(a + (b - a) * (np.arange(per_cell) + 0.5) / per_cell)
    return np.array(ts)


def cmd_translate(args) -> int:
    if args.rho is None:
        raise InputError("--rho is required")
    doc = load_json(args.inputs[0])
    c = curve_from_doc(doc)
    try:
        src, tc = translate_refined(c, args.rho, max_error=TRANSLATE_TOL)
    except RegularityError as e:
        raise InputError(f"singular translation: {e}") from None
    t = _interior_params(c)
    measured = trace_curvature(tc, t)
    expected = translated_curvature(np.array([c.kappa_at(s) for s in t]), args.rho)
    report = {
        "format_version": FORMAT_VERSION,
        "kind": "translate_report",
        "rho": args.rho,
        "nodes": {
            "t": src.grid,
            "kappa_before": src.kappa,
            "kappa_after": tc.kappa,
            "formula_residual": np.abs(translated_curvature(src.kappa, args.rho) - tc.kappa),
        },
        "samples": {"t": t, "kappa_measured": measured, "formula_residual": np.abs(measured - expected)},
        "bounds_after": [_encode_real(tc.bounds.lo), _encode_real(tc.bounds.hi)],
    }
    out = Path(args.out)
    atomic_write(out, dumps(curve_to_doc(tc, _model(args, doc))))
    atomic_write(_sibling(out, "report"), dumps(_round(report)))
    return EXIT_OK


def _band_violations(sc: SampledCurve, b: CurvatureInterval, tol: float) -> int:
    k = sc.curvatures
    return int(np.sum((k <= b.lo - tol) | (k >= b.hi + tol)))


def cmd_contract(args) -> int:
    tol = default_tolerance()
    curves = [curve_from_doc(load_json(p)) for p in args.inputs]
    b = curves[0].bounds
    rel = classify_interval(b)
    if any(c.bounds != b for c in curves):
        raise InputError("input curves must share their curvature bounds")
    frames = args.frames
    if frames < 2:
        raise InputError("--frames must be at least 2")
    s_grid = np.linspace(0.0, 1.0, frames)
    try:
        if b.lo >= 1.0:
            if len(curves) != 2:
                raise InputError("the disjoint case needs exactly two input curves")
            g0, g1 = (reparam_by_argument(c, samples=args.samples) for c in curves)
            try:
                fam = contract_disjoint(g0, g1, s_grid, b)
            except ValueError as e:
                raise InputError(f"inputs are not in the same curve space: {e}") from None
            traces = [g.to_sampled() for g in fam.curves]
            case = "disjoint"
        elif b.lo >= -1.0 and b.hi <= 1.0:
            if len(curves) != 1:
                raise InputError("the contained case takes one input curve")
            prof, g = curve_to_profile(curves[0], samples=args.samples)
            fam = contract_contained(prof, s_grid)
            traces = profile_family_curves(fam, g)
            case = "contained"
        else:
            raise InputError(f"no contraction is available for the {rel.value} class")
    except HomotopyError as e:
        raise InputError(str(e)) from None
    outdir = Path(args.out)
    model = _model(args)
    ref_end = integrate(curves[0], params=[0.0, 1.0])
    tau0 = total_turning(traces[0])
    rows = []
    for i, (s, sc) in enumerate(zip(s_grid, traces)):
        atomic_write(outdir / f"frame_{i:03d}.csv", trace_csv(sc))
        atomic_write(outdir / f"frame_{i:03d}.svg", render_svg([sc], model))
        rows.append(
            {
                "s": s,
                "band_violations": _band_violations(sc, b, tol),
                "turning": total_turning(sc),
                "turning_drift": abs(total_turning(sc) - tau0),
                "start_drift": hyperboloid_distance(sc.points[0], ref_end.points[0]),
                "end_drift": hyperboloid_distance(sc.points[-1], ref_end.points[-1]),
            }
        )
    report = {
        "format_version": FORMAT_VERSION,
        "kind": "contract_report",
        "case": case,
        "frames": frames,
        "bounds": [_encode_real(b.lo), _encode_real(b.hi)],
        "family": fam.residuals,
        "per_frame": rows,
        "band_violations": sum(r["band_violations"] for r in rows),
        "max_turning_drift": max(r["turning_drift"] for r in rows),
        "max_end_drift": max(max(r["start_drift"], r["end_drift"]) for r in rows),
    }
    atomic_write(outdir / "report.json", dumps(_round(report)))
    return EXIT_OK


COMMANDS = {
    "render": cmd_render,
    "classify": cmd_classify,
    "reduce": cmd_reduce,
    "translate": cmd_translate,
    "contract": cmd_contract,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypcurve", description="Curves of bounded geodesic curvature in the hyperbolic plane.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "render": "draw a curve document as SVG, or export a CSV trace when --out ends in .csv",
        "classify": "classify a curve-space problem and decide whether it is empty",
        "reduce": "reduce a problem to its normal form; writes a recipe and the reduced problem",
        "translate": "normal translation of a curve document by --rho",
        "contract": "contraction frames for one (contained case) or two (disjoint case) curves",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text, description=text)
        sp.add_argument("--in", dest="inputs", action="append", required=True, metavar="PATH")
        sp.add_argument("--out", required=True, metavar="PATH")
        sp.add_argument("--model", default=None, help="disk, halfplane or mercator")
        sp.add_argument("--samples", type=int, default=257, help=argparse.SUPPRESS)
        if name == "translate":
            sp.add_argument("--rho", type=float, required=True)
        if name in ("classify", "reduce"):
            sp.add_argument("--kappa1", type=float, default=None)
            sp.add_argument("--kappa2", type=float, default=None)
            sp.add_argument("--turning", type=float, default=None)
        if name == "classify":
            sp.add_argument("--budget", type=int, default=48, help="maximum number of steering starts")
        if name == "contract":
            sp.add_argument("--frames", type=int, default=20)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, ModelDomainError, RegularityError) as e:
        print(f"hypcurve {args.command}: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as e:
        print(f"hypcurve {args.command}: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
