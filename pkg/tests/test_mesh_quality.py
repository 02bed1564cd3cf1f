import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gmtkit import OrientedComplex2
from gmtkit.complex import delaunay_complex, triangle_measures
from gmtkit.errors import StructureError
from gmtkit.mesh_quality import (
    c_theta,
    diameter_inradius_ratio_bound_check,
    grid_angle_set,
    grid_rotation,
    min_created_angle,
    regularity_constant,
    sdt_bounds,
    triangle_angles,
)

from oracles import min_grid_angle, scan_best_rotation

SQ3 = math.sqrt(3)
BETA = 4 * (2 + SQ3) * (24 + 12 * SQ3 + math.pi) / math.pi
EQUILATERAL = [(0, 0), (1, 0), (0.5, SQ3 / 2)]


def vartheta_by_hand(p, q, r):
    a, b, c = math.dist(q, r), math.dist(r, p), math.dist(p, q)
    s = (a + b + c) / 2
    area = math.sqrt(s * (s - a) * (s - b) * (s - c))  # Heron
    inr = area / s
    diam = max(a, b, c)
    return diam * (a + b + c) / (math.pi * (inr / 2) ** 2) + 2 * diam / inr


# oracles first


def test_equilateral_vartheta_closed_form():
    rep = regularity_constant(OrientedComplex2.build(EQUILATERAL, (), [(0, 1, 2)]))
    assert rep.vartheta == pytest.approx(144 / math.pi + 4 * SQ3, rel=1e-13)
    assert rep.vartheta == pytest.approx(vartheta_by_hand(*EQUILATERAL), rel=1e-12)
    assert rep.theta_min == pytest.approx(math.pi / 3)


def test_c_theta_values():
    assert c_theta(math.pi / 3) == pytest.approx(144 / math.pi + 4 * SQ3, abs=1e-9)
    assert c_theta(math.pi / 6) == pytest.approx(BETA, abs=1e-9)
    assert c_theta(math.pi / 6) == pytest.approx(227.7355, abs=1e-4)
    grid = np.linspace(0.01, math.pi / 3, 100)
    vals = [c_theta(t) for t in grid]
    assert all(b < a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("theta", [0.0, -0.1, math.pi / 3 + 0.01, math.pi])
def test_c_theta_domain(theta):
    with pytest.raises(StructureError):
        c_theta(theta)


def test_thirty_sixty_ninety():
    tri = [(0, 0), (SQ3, 0), (0, 1)]
    rep = regularity_constant(OrientedComplex2.build(tri, (), [(0, 1, 2)]))
    assert rep.theta_min == pytest.approx(math.pi / 6, rel=1e-12)
    assert rep.vartheta == pytest.approx(vartheta_by_hand(*tri), rel=1e-12)
    assert rep.vartheta <= c_theta(math.pi / 6)


def test_ratio_bound_examples():
    ratio, bound, ok = diameter_inradius_ratio_bound_check(EQUILATERAL)
    assert ratio == pytest.approx(2 * SQ3) and bound == pytest.approx(2 * SQ3) and ok
    sliver = [(0, 0), (1, 0), (math.cos(math.radians(1)), math.sin(math.radians(1)))]
    ratio, bound, ok = diameter_inradius_ratio_bound_check(sliver)
    assert ok and bound > 100


def test_report_json_ready():
    rep = regularity_constant(delaunay_complex(np.random.default_rng(0).uniform(0, 1, (10, 2))))
    d = rep.as_dict()
    assert d["vartheta"] == max(d["per_triangle_vartheta"])


def test_sdt_examples():
    V = 144 / math.pi + 4 * SQ3
    b = sdt_bounds(2, 1, V, 0.1, 1.0, 2.0)
    assert b.mass_P == pytest.approx(4 * V + 0.1 * (4 * V) ** 2 * 2, rel=1e-14)
    assert b.mass_boundary_P == pytest.approx((4 * V) ** 2 * 2)
    assert b.mass_Q == pytest.approx(0.1 * 4 * V * (1 + 4 * V) * 2)
    assert b.mass_R == pytest.approx(0.1 * 4 * V)
    assert b.flat_distance == pytest.approx(0.1 * 4 * V * (1 + (1 + 4 * V) * 2))
    same = sdt_bounds(1, 1, V, 0.1, 1.0, 2.0)
    assert same.mass_P == pytest.approx(1.0 + 4 * V * 0.1 * 2)
    multi = sdt_bounds(2, 1, V, 0.1, 1.0, 2.0, "multi", m=1, n=0, eps=2.0)
    assert multi == b


def test_sdt_errors():
    with pytest.raises(StructureError):
        sdt_bounds(1, 2, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(StructureError):
        sdt_bounds(2, 1, -1.0, 1.0, 1.0, 1.0)
    with pytest.raises(StructureError):
        sdt_bounds(2, 1, 1.0, 1.0, 1.0, 1.0, "tight", eps=0.0)
    with pytest.raises(StructureError):
        sdt_bounds(2, 1, 1.0, 1.0, 1.0, 1.0, "bogus")


def test_grid_rotation_examples():
    phi, g = grid_rotation([(1, 0)])
    assert g == pytest.approx(math.pi / 4)
    assert min_grid_angle(phi, [(1, 0)]) >= math.pi / 4 - 1e-12
    phi, g = grid_rotation([(1, 0), (0, 1), (-1, 0), (0, -2)])
    assert len(grid_angle_set([(1, 0), (0, 1)])) == 2
    assert g == pytest.approx(math.pi / 4)
    assert phi == pytest.approx(math.pi / 4)


def test_grid_rotation_eighths_against_scan():
    dirs = [(math.cos(k * math.pi / 8), math.sin(k * math.pi / 8)) for k in range(8)]
    phi, g = grid_rotation(dirs)
    got = min_grid_angle(phi, dirs)
    assert got >= g - 1e-9
    assert got >= scan_best_rotation(dirs) - 1e-6


# properties


@st.composite
def triangles_with_min_angle(draw, min_deg):
    a = draw(st.floats(min_deg, 180 - 2 * min_deg))
    b = draw(st.floats(min_deg, 180 - min_deg - a))
    if 180 - a - b < min_deg:
        b = 180 - a - min_deg
    A, B = math.radians(a), math.radians(b)
    scale = draw(st.floats(0.01, 100))
    rot = draw(st.floats(0, 2 * math.pi))
    # law of sines: side opposite C has length scale*sin(C)
    c = scale * math.sin(math.pi - A - B)
    bside = scale * math.sin(B)
    pts = np.array([[0, 0], [c, 0], [bside * math.cos(A), bside * math.sin(A)]])
    R = np.array([[math.cos(rot), -math.sin(rot)], [math.sin(rot), math.cos(rot)]])
    return [tuple(p) for p in pts @ R.T]


@given(triangles_with_min_angle(5.0))
def test_vartheta_below_c_theta(tri):
    rep = regularity_constant(OrientedComplex2.build(tri, (), [(0, 1, 2)]))
    assert rep.vartheta <= rep.c_theta_bound * (1 + 1e-6)
    assert rep.vartheta == pytest.approx(vartheta_by_hand(*tri), rel=1e-9)


@given(triangles_with_min_angle(20.0))
def test_ratio_bound_holds(tri):
    assert diameter_inradius_ratio_bound_check(tri)[2]


@given(st.integers(0, 2**32 - 1))
def test_angles_sum_to_pi(seed):
    p = np.random.default_rng(seed).uniform(-1, 1, (3, 2))
    try:
        triangle_measures(*p)
    except StructureError:
        return
    assert sum(triangle_angles(*p)) == pytest.approx(math.pi, abs=1e-9)


positive = st.floats(0, 50)


@given(positive, positive, positive, positive, st.integers(0, 3), st.integers(0, 2))
def test_bounds_monotone(v, delta, mt, mb, extra, d):
    p = d + extra
    base = sdt_bounds(p, d, v, delta, mt, mb)
    for bumped in (
        sdt_bounds(p, d, v * 1.1 + 0.01, delta, mt, mb),
        sdt_bounds(p, d, v, delta * 1.1 + 0.01, mt, mb),
        sdt_bounds(p, d, v, delta, mt * 1.1 + 0.01, mb),
        sdt_bounds(p, d, v, delta, mt, mb * 1.1 + 0.01),
    ):
        for k in ("mass_P", "mass_boundary_P", "mass_Q", "mass_R", "flat_distance"):
            assert getattr(bumped, k) >= getattr(base, k)


@given(positive, positive, positive, positive, st.floats(1e-6, 1.9))
def test_tight_variant_never_worse(v, delta, mt, mb, eps):
    classic = sdt_bounds(2, 1, v, delta, mt, mb)
    multi = sdt_bounds(2, 1, v, delta, mt, mb, "multi", m=1, n=0, eps=eps)
    tight = sdt_bounds(2, 1, v, delta, mt, mb, "single_tight", eps=eps)
    for k in ("mass_P", "mass_boundary_P", "mass_Q", "mass_R", "flat_distance"):
        assert getattr(multi, k) <= getattr(classic, k)
        assert getattr(tight, k) == getattr(multi, k)


@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=40))
def test_grid_rotation_guarantee(dirs):
    dirs = [d for d in dirs if math.hypot(*d) > 1e-6]
    if not dirs:
        return
    phi, g = grid_rotation(dirs)
    assert min_grid_angle(phi, dirs) >= g - 1e-9
    assert min_created_angle(phi, dirs) == pytest.approx(min_grid_angle(phi, dirs), abs=1e-9)
