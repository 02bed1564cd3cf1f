"""Acceptance criteria 1-10. Each test records one PASS/FAIL line (shown in the summary)."""

import io as stdio
import itertools
import math
import time

import numpy as np
import pytest

from gmtkit import (
    Chain,
    FlatNormProblem,
    OrientedComplex2,
    boundary,
    lambda_breakpoints,
    lambda_sweep,
    mass,
    measure_complex,
    solve_flat_norm,
    strip_complex,
)
from gmtkit import io
from gmtkit.area_invariant import (
    Signature,
    SimplePolygon,
    disk_polygon_area,
    is_simple,
    monte_carlo_area,
    signature,
)
from gmtkit.cli import main
from gmtkit.complex import circle_ngon_complex, delaunay_complex, path_chain
from gmtkit.mesh_quality import c_theta, grid_rotation, regularity_constant
from gmtkit.reconstruction import (
    FourierPolygon,
    best_fit_circle,
    flower_polygon,
    multiresolution_reconstruct,
    objective,
    synthesize,
)

from oracles import brute_flat_norm, min_grid_angle, random_star_polygon

SQ3 = math.sqrt(3)


def test_1_strip_convergence_constant(record):
    t0 = time.perf_counter()
    errs = []
    integral = True
    for n in (1, 2, 4, 8):
        cx, top, _ = strip_complex(n, 2.0)
        dec = solve_flat_norm(FlatNormProblem(cx, top, 1.0))
        span = n * 2.0 * SQ3
        errs.append(abs(dec.value / span - 2 / SQ3))
        integral &= dec.is_integral
    elapsed = time.perf_counter() - t0
    ok = max(errs) <= 1e-9 and integral and elapsed < 1.0
    record(1, ok, f"max |ratio - 2/sqrt3| = {max(errs):.1e}, {elapsed:.3f} s")
    assert ok


def test_2_simplicial_integrality(record):
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    solves = failures = 0
    max_tris = 0
    for _ in range(200):
        while True:
            cx = delaunay_complex(rng.uniform(0, 1, (rng.integers(6, 27), 2)))
            if 1 <= cx.n_triangles <= 50:
                break
        max_tris = max(max_tris, cx.n_triangles)
        k = rng.integers(1, min(cx.n_edges, 12) + 1)
        idx = rng.choice(cx.n_edges, size=k, replace=False)
        T = Chain(1, dict(zip(idx.tolist(), rng.integers(-2, 3, k).tolist())))
        for lam in (0.5, 1.0, 2.0):
            dec = solve_flat_norm(FlatNormProblem(cx, T, lam))
            solves += 1
            exact = dec.x_chain + boundary(dec.s_chain, cx) == T
            if not (dec.is_integral and exact):
                failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 60 and max_tris <= 50
    record(2, ok, f"{solves} solves, {failures} non-integral, <= {max_tris} triangles, {elapsed:.1f} s")
    assert ok


def _generator_complexes():
    """Fixed set of small planar complexes (at most four triangles)."""
    h = SQ3 / 2
    out = {
        "triangle": OrientedComplex2.build([(0, 0), (1, 0), (0.5, h)], (), [(0, 1, 2)]),
        "right": OrientedComplex2.build([(0, 0), (3, 0), (0, 4)], (), [(0, 1, 2)]),
        "pair": OrientedComplex2.build([(0, 0), (1, 0), (1, 1), (0, 1)], (), [(0, 1, 2), (0, 2, 3)]),
        "fan3": OrientedComplex2.build(
            [(0, 0), (1, 0), (0.8, 0.9), (-0.2, 1.1), (-1, 0.2)], (), [(0, 1, 2), (0, 2, 3), (0, 3, 4)]
        ),
        "wheel4": OrientedComplex2.build(
            [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)], (), [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1)]
        ),
        "skinny": OrientedComplex2.build(
            [(0, 0), (4, 0), (2, 0.3), (6, 0.3)], (), [(0, 1, 2), (1, 3, 2)]
        ),
        "triangle_with_tail": OrientedComplex2.build(
            [(0, 0), (1, 0), (0.5, h), (2, 2)], [(2, 3)], [(0, 1, 2)]
        ),
    }
    for n in (1, 2):
        out[f"strip{n}"] = strip_complex(n)[0]
    return out


def test_3_brute_force_oracle(record):
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    worst = 0.0
    cases = 0
    for cx in _generator_complexes().values():
        assert cx.n_triangles <= 4
        chains = [Chain.from_vector(1, rng.integers(-2, 3, cx.n_edges)) for _ in range(4)]
        loop = boundary(Chain(2, {t: 1 for t in range(cx.n_triangles)}), cx)
        chains += [loop, loop * 2]
        for T, lam in itertools.product(chains, (0.5, 1.0, 2.0)):
            lp = solve_flat_norm(FlatNormProblem(cx, T, lam)).value
            bf = brute_flat_norm(cx.vertices, cx.edges, cx.triangles, T.to_vector(cx.n_edges), lam, 3)
            worst = max(worst, abs(lp - bf))
            cases += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 10
    record(3, ok, f"{cases} cases, max |LP - brute force| = {worst:.1e}, {elapsed:.2f} s")
    assert ok


def test_4_lambda_threshold(record):
    cx = OrientedComplex2.build([(0, 0), (1, 0), (0.5, SQ3 / 2)], (), [(0, 1, 2)])
    T = path_chain(cx, [0, 1, 2], closed=True)
    problem = FlatNormProblem(cx, T)
    vals = [v for _, v, _ in lambda_sweep(problem, [1.0, 20.0])]
    bps = lambda_breakpoints(problem, 1.0, 20.0)
    # brute force: S = k * triangle, X = T - dS; value is min over k of |1-k|*3 + lam*|k|*sqrt3/4
    edges_len = 3.0
    area = SQ3 / 4
    brute = lambda lam: min(abs(1 - k) * edges_len + lam * abs(k) * area for k in range(-3, 4))  # noqa: E731
    crossing = edges_len / area
    ok = (
        abs(vals[0] - SQ3 / 4) <= 1e-12
        and abs(vals[1] - 3.0) <= 1e-12
        and abs(vals[0] - brute(1.0)) <= 1e-12
        and len(bps) == 1
        and abs(bps[0] - 4 * SQ3) <= 1e-6
        and abs(crossing - 4 * SQ3) <= 1e-12
    )
    record(4, ok, f"values {vals[0]:.6f}, {vals[1]:.6f}; breakpoint {bps[0] if bps else float('nan'):.9f}")
    assert ok


def test_5_circle_ngon(record):
    t0 = time.perf_counter()
    rows = []
    for n in (8, 16, 32):
        cx, circle, ngon = circle_ngon_complex(n, 256)
        T = circle - ngon
        dec = solve_flat_norm(FlatNormProblem(cx, T, 1.0))
        bound = math.pi - n / 2 * math.sin(2 * math.pi / n)
        rows.append((n, dec.value, bound, mass(T, measure_complex(cx)), dec.is_integral))
    elapsed = time.perf_counter() - t0
    values = [r[1] for r in rows]
    ok = (
        all(v <= b * 1.02 for _, v, b, _, _ in rows)
        and all(b < a for a, b in zip(values, values[1:]))
        and all(m > 6 for *_, m, _ in rows)
        and all(r[4] for r in rows)
        and elapsed < 30
    )
    detail = "; ".join(f"n={n}: F={v:.4f} (bound {b:.4f}), M={m:.2f}" for n, v, b, m, _ in rows)
    record(5, ok, f"{detail}; {elapsed:.1f} s")
    assert ok


def test_6_regularity_constants(record):
    t0 = time.perf_counter()
    beta = 4 * (2 + SQ3) * (24 + 12 * SQ3 + math.pi) / math.pi
    eq = regularity_constant(OrientedComplex2.build([(0, 0), (1, 0), (0.5, SQ3 / 2)], (), [(0, 1, 2)]))
    c60 = c_theta(math.pi / 3)
    checks = [
        abs(c60 - (144 / math.pi + 4 * SQ3)) <= 1e-9,
        abs(c60 - eq.vartheta) <= 1e-9,
        abs(c_theta(math.pi / 6) - beta) <= 1e-9,
    ]
    rng = np.random.default_rng(6)
    tested = violations = 0
    min5 = math.radians(5)
    while tested < 500:
        p = rng.uniform(-1, 1, (3, 2))
        try:
            rep = regularity_constant(OrientedComplex2.build(p, (), [(0, 1, 2)]))
        except Exception:
            continue
        if rep.theta_min < min5:
            continue
        tested += 1
        violations += rep.vartheta > rep.c_theta_bound
    elapsed = time.perf_counter() - t0
    ok = all(checks) and violations == 0 and elapsed < 5
    record(6, ok, f"closed forms {sum(checks)}/3, {violations}/500 sweep violations, {elapsed:.2f} s")
    assert ok


def test_7_grid_rotation(record):
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    worst_margin = math.inf
    for _ in range(100):
        cx = delaunay_complex(rng.uniform(0, 1, (rng.integers(3, 20), 2)))
        edges = cx.edges[rng.permutation(cx.n_edges)[:40]]
        dirs = [tuple(cx.vertices[b] - cx.vertices[a]) for a, b in edges]
        phi, guaranteed = grid_rotation(dirs)
        # independent count of distinct line angles {phi_e, phi_e + pi/2} mod pi
        angles = sorted({round(math.atan2(dy, dx) % math.pi, 11) % round(math.pi, 11) for dx, dy in dirs}
                        | {round((math.atan2(dy, dx) + math.pi / 2) % math.pi, 11) % round(math.pi, 11)
                           for dx, dy in dirs})
        assert guaranteed == pytest.approx(math.pi / (2 * len(angles)), rel=1e-12)
        worst_margin = min(worst_margin, min_grid_angle(phi, dirs) - guaranteed)
    elapsed = time.perf_counter() - t0
    ok = worst_margin >= -1e-9 and elapsed < 5
    record(7, ok, f"100 PSLGs, min(created angle - pi/2N) = {worst_margin:.3e}, {elapsed:.2f} s")
    assert ok


def test_8_area_oracle(record):
    rng = np.random.default_rng(8)
    t0 = time.perf_counter()
    worst_z = 0.0
    for i in range(50):
        v = random_star_polygon(rng, int(rng.integers(4, 16)))
        poly = SimplePolygon(v)
        if i % 2:
            center = v[rng.integers(len(v))]
        else:
            center = rng.uniform(-1.2, 1.2, 2)
        r = rng.uniform(0.1, 1.2)
        exact = disk_polygon_area(poly, center, r)
        est, se = monte_carlo_area(poly, center, r, 10**6, seed=1000 + i)
        worst_z = max(worst_z, abs(exact - est) / se if se > 0 else (0.0 if exact == est else math.inf))
    big = SimplePolygon([(0, 0), (1000, 0), (1000, 1000), (0, 1000)])
    r = 0.1
    analytic_err = max(
        abs(disk_polygon_area(big, (0, 0), r) - math.pi * r * r / 4),
        abs(disk_polygon_area(big, (1000, 1000), r) - math.pi * r * r / 4),
        abs(disk_polygon_area(big, (500, 0), r) - math.pi * r * r / 2),
        abs(disk_polygon_area(big, (0, 123.4), r) - math.pi * r * r / 2),
    )
    elapsed = time.perf_counter() - t0
    ok = worst_z <= 4 and analytic_err <= 1e-9 and elapsed < 60
    record(8, ok, f"max |exact - MC|/stderr = {worst_z:.2f}, analytic error {analytic_err:.1e}, {elapsed:.1f} s")
    assert ok


@pytest.mark.slow
def test_9_reconstruction_regression(record):
    N, r = 64, 0.3
    target = signature(SimplePolygon(flower_polygon(N, 3, 0.3)), r)
    start = best_fit_circle(target, N)
    f0 = objective(start.coeffs, target, r, N)
    t0 = time.perf_counter()
    states = multiresolution_reconstruct(target, r, N, [4, 6, 8], 3000)
    elapsed = time.perf_counter() - t0
    objs = [s.objective for s in states]
    simple = all(is_simple(synthesize(s.incumbent)) for s in states)
    monotone = all(b <= a for a, b in zip(objs, objs[1:])) and all(
        all(y <= x for x, y in zip(s.history, s.history[1:])) for s in states
    )
    ok = monotone and objs[-1] <= 0.1 * f0 and simple and elapsed < 300
    record(
        9, ok,
        "stage objectives " + ", ".join(f"{o:.3e}" for o in objs)
        + f"; final/initial = {objs[-1] / f0:.4f}; {elapsed:.1f} s",
    )
    assert ok


def test_10_round_trip_and_determinism(record, tmp_path):
    rng = np.random.default_rng(10)
    cx = delaunay_complex(rng.normal(size=(15, 2)))
    chain = Chain(1, {0: 3, 5: -2**65, 7: 1})
    poly = random_star_polygon(rng, 12)
    sig = signature(SimplePolygon(poly), 0.37)
    fp = FourierPolygon(rng.normal(size=(4, 5)), 40)
    trips = {
        "mesh": all(
            np.array_equal(getattr(io.loads_mesh(io.dumps_mesh(cx)), k), getattr(cx, k))
            for k in ("vertices", "edges", "triangles", "triangle_signs")
        ),
        "chain": io.loads_chain(io.dumps_chain(chain)) == chain,
        "polygon": np.array_equal(io.loads_polygon(io.dumps_polygon(poly)), poly),
        "signature": (lambda s: s.radius == sig.radius and np.array_equal(s.values, sig.values))(
            io.loads_signature(io.dumps_signature(sig))
        ),
        "coefficients": np.array_equal(io.loads_coefficients(io.dumps_coefficients(fp)).coeffs, fp.coeffs),
    }
    strip, top, _ = strip_complex(2)
    io.write_mesh(tmp_path / "mesh.txt", strip)
    io.write_chain(tmp_path / "t.txt", top)
    io.write_polygon(tmp_path / "poly.csv", poly)
    io.write_signature(tmp_path / "sig.csv", sig)
    commands = {
        "flatnorm": ["flatnorm", "--mesh", str(tmp_path / "mesh.txt"), "--chain", str(tmp_path / "t.txt"),
                     "--sweep", "0.5,2", "--out", "{d}/out.txt", "--svg", "{d}/out.svg"],
        "signature": ["signature", "--polygon", str(tmp_path / "poly.csv"), "--radius", "0.37",
                      "--out", "{d}/out.txt", "--svg", "{d}/out.svg"],
        "reconstruct": ["reconstruct", "--signature", str(tmp_path / "sig.csv"), "--m-schedule", "2,3",
                        "--budget", "200", "--out", "{d}/out.txt", "--svg", "{d}/out.svg"],
        "bounds": ["bounds", "--p", "2", "--d", "1", "--vartheta", "52.7", "--diam", "0.1",
                   "--mass-t", "1", "--mass-bt", "2", "--json"],
        "quality": ["quality", "--mesh", str(tmp_path / "mesh.txt")],
        "strip-demo": ["strip-demo", "--n", "3", "--svg", "{d}/out.svg"],
    }
    identical = {}
    for name, argv in commands.items():
        outputs = []
        for rep in range(2):
            d = tmp_path / f"{name}{rep}"
            d.mkdir()
            buf = stdio.StringIO()
            code = main([a.format(d=d) for a in argv], out=buf)
            files = {p.name: p.read_bytes() for p in sorted(d.iterdir())}
            outputs.append((code, buf.getvalue(), files))
        identical[name] = outputs[0] == outputs[1] and outputs[0][0] == 0
    ok = all(trips.values()) and all(identical.values())
    bad = [k for k, v in {**trips, **identical}.items() if not v]
    record(10, ok, f"{len(trips)} formats round-trip, {len(identical)} commands byte-identical"
           + (f"; failing: {bad}" if bad else ""))
    assert ok
