"""``gmt`` command line front end."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import io
from .area_invariant import SimplePolygon, signature
from .complex import mass, measure_complex, strip_complex
from .errors import GMTError
from .flat_norm import FlatNormProblem, lambda_sweep, solve_flat_norm
from .io import fmt
from .mesh_quality import regularity_constant, sdt_bounds
from .reconstruction import multiresolution_reconstruct, synthesize
from .svg import (
    PALETTE,
    Curve,
    Disk,
    Scene,
    Segment,
    Trace,
    chain_fills,
    chain_segments,
    complex_segments,
    emit_svg,
)


def _styled(text: str, code: str) -> str:
    if os.environ.get("GMT_NO_COLOR") or not sys.stderr.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _m_schedule(text: str) -> list[int]:
    try:
        if ":" in text:
            a, b = (int(t) for t in text.split(":"))
            out = list(range(a, b + 1))
        else:
            out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m schedule {text!r}") from None
    if not out or any(m < 1 for m in out) or any(b <= a for a, b in zip(out, out[1:])):
        raise argparse.ArgumentTypeError(f"m schedule must be ascending positive integers: {text!r}")
    return out


def _nonneg(text: str) -> float:
    v = float(text)
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a finite nonnegative number, got {text!r}")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a finite positive number, got {text!r}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gmt", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    fn = sub.add_parser("flatnorm", help="simplicial flat norm of a chain on a mesh")
    fn.add_argument("--mesh", required=True)
    fn.add_argument("--chain", required=True)
    fn.add_argument("--lambda", dest="lam", type=_nonneg, default=1.0)
    fn.add_argument("--sweep", type=_float_list)
    fn.add_argument("--out")
    fn.add_argument("--svg")

    sg = sub.add_parser("signature", help="area invariant signature of a polygon")
    sg.add_argument("--polygon", required=True)
    sg.add_argument("--radius", required=True, type=_positive)
    sg.add_argument("--out")
    sg.add_argument("--svg")

    rc = sub.add_parser("reconstruct", help="fit a Fourier polygon to a signature")
    rc.add_argument("--signature", required=True)
    rc.add_argument("--m-schedule", required=True, type=_m_schedule)
    rc.add_argument("--budget", type=_positive_int, default=20000)
    rc.add_argument("--out")
    rc.add_argument("--svg")
    rc.add_argument("--reference", help="polygon CSV of the curve that generated the signature")

    bd = sub.add_parser("bounds", help="deformation theorem mass bounds")
    bd.add_argument("--p", type=int, required=True)
    bd.add_argument("--d", type=int, required=True)
    bd.add_argument("--vartheta", type=_nonneg, required=True)
    bd.add_argument("--diam", type=_nonneg, required=True)
    bd.add_argument("--mass-t", type=_nonneg, required=True)
    bd.add_argument("--mass-bt", type=_nonneg, required=True)
    bd.add_argument("--variant", choices=("classic", "tight", "multi"), default="classic")
    bd.add_argument("--m", type=int, default=1)
    bd.add_argument("--n", type=int, default=0)
    bd.add_argument("--eps", type=_nonneg, default=0.0)
    bd.add_argument("--json", action="store_true")

    q = sub.add_parser("quality", help="regularity report of a mesh")
    q.add_argument("--mesh", required=True)
    q.add_argument("--json", action="store_true")

    sd = sub.add_parser("strip-demo", help="flat norm of the top chain of an equilateral strip")
    sd.add_argument("--n", type=_positive_int, default=2)
    sd.add_argument("--lambda", dest="lam", type=_nonneg, default=1.0)
    sd.add_argument("--side", type=_positive, default=2.0)
    sd.add_argument("--svg")
    return p


def _flatnorm(args, out):
    cx = io.read_mesh(args.mesh)
    chain = io.read_chain(args.chain)
    problem = FlatNormProblem(cx, chain, args.lam)
    dec = solve_flat_norm(problem)
    text = io.dumps_decomposition(dec)
    if args.out:
        io.write_atomic(args.out, text)
    else:
        out.write(text)
    if args.sweep:
        for lam, value, _ in lambda_sweep(problem, sorted(args.sweep)):
            out.write(f"lambda {fmt(lam)} value {fmt(value)}\n")
    if args.svg:
        scene = Scene(title="flat norm decomposition")
        scene.segments += complex_segments(cx)
        scene.fills += chain_fills(cx, dec.s_chain)
        scene.segments += chain_segments(cx, chain, PALETTE[2], dashed=True)
        scene.segments += chain_segments(cx, dec.x_chain, PALETTE[1])
        io.write_atomic(args.svg, emit_svg(scene))


def _signature(args, out):
    poly = SimplePolygon(io.read_polygon(args.polygon))
    sig = signature(poly, args.radius)
    if args.out:
        io.write_signature(args.out, sig)
    else:
        out.write(io.dumps_signature(sig))
    if args.svg:
        scene = Scene(title="area invariant signature")
        scene.curves.append(Curve(poly.vertices))
        scene.disks.append(Disk(tuple(poly.vertices[0]), args.radius))
        scene.traces.append(Trace(sig.values))
        scene.marker = 0
        io.write_atomic(args.svg, emit_svg(scene))


def _reconstruct(args, out):
    target = io.read_signature(args.signature)
    N = len(target)
    states = multiresolution_reconstruct(target, target.radius, N, args.m_schedule, args.budget)
    for s in states:
        out.write(
            f"m {s.incumbent.m} objective {fmt(s.objective)} evaluations {s.evaluations}\n"
        )
    final = states[-1].incumbent
    if args.out:
        io.write_coefficients(args.out, final)
    else:
        out.write(io.dumps_coefficients(final))
    if args.svg:
        scene = Scene(title="reconstruction")
        if args.reference:
            scene.curves.append(Curve(io.read_polygon(args.reference), color=PALETTE[0]))
        scene.traces.append(Trace(target.values, PALETTE[0]))
        for i, s in enumerate(states):
            color = PALETTE[1 + i % (len(PALETTE) - 1)]
            v = synthesize(s.incumbent)
            scene.curves.append(Curve(v, color=color, width=1.0))
            scene.traces.append(Trace(signature(SimplePolygon(v), target.radius).values, color))
        io.write_atomic(args.svg, emit_svg(scene))


def _bounds(args, out):
    variant = {"tight": "single_tight"}.get(args.variant, args.variant)
    b = sdt_bounds(
        args.p, args.d, args.vartheta, args.diam, args.mass_t, args.mass_bt,
        variant, args.m, args.n, args.eps,
    )
    fields = ["mass_P", "mass_boundary_P", "mass_Q", "mass_R", "flat_distance"]
    if args.json:
        out.write(json.dumps({k: getattr(b, k) for k in fields}, sort_keys=True) + "\n")
    else:
        width = max(map(len, fields))
        for k in fields:
            out.write(f"{k:<{width}}  {fmt(getattr(b, k))}\n")


def _quality(args, out):
    cx = io.read_mesh(args.mesh)
    rep = regularity_constant(cx)
    if args.json:
        out.write(json.dumps(rep.as_dict(), sort_keys=True) + "\n")
        return
    rows = [
        ("triangles", str(cx.n_triangles)),
        ("theta_min", fmt(rep.theta_min)),
        ("theta_min_deg", fmt(math.degrees(rep.theta_min))),
        ("vartheta", fmt(rep.vartheta)),
        ("c_theta_bound", fmt(rep.c_theta_bound)),
    ]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        out.write(f"{k:<{width}}  {v}\n")


def _strip_demo(args, out):
    cx, top, bottom = strip_complex(args.n, args.side)
    dec = solve_flat_norm(FlatNormProblem(cx, top, args.lam))
    span = args.n * args.side * math.sqrt(3)
    out.write(f"value {fmt(dec.value)}\n")
    out.write(f"ratio {fmt(dec.value / span)}\n")
    out.write(f"mass {fmt(mass(top, measure_complex(cx)))}\n")
    out.write(f"integral {'true' if dec.is_integral else 'false'}\n")
    if args.svg:
        scene = Scene(title="strip")
        scene.segments += complex_segments(cx)
        scene.fills += chain_fills(cx, dec.s_chain)
        scene.segments.append(Segment((0.0, 0.0), (span, 0.0), PALETTE[2], 1.0, dashed=True))
        path = [3 * i + k for i in range(args.n) for k in (0, 1)] + [3 * args.n]
        scene.curves.append(Curve(cx.vertices[path], closed=False, color=PALETTE[1]))
        io.write_atomic(args.svg, emit_svg(scene))


COMMANDS = {
    "flatnorm": _flatnorm,
    "signature": _signature,
    "reconstruct": _reconstruct,
    "bounds": _bounds,
    "quality": _quality,
    "strip-demo": _strip_demo,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args, out)
    except GMTError as exc:
        print(_styled("error:", "31"), exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print(_styled("error:", "31"), exc, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
