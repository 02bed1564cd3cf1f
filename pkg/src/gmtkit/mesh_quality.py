"""Triangle regularity constants, deformation mass bounds and grid rotation."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .complex import OrientedComplex2, measure_complex, triangle_measures
from .errors import StructureError

DEDUP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class RegularityReport:
    theta_min: float
    vartheta: float
    per_triangle_vartheta: np.ndarray
    c_theta_bound: float

    def as_dict(self) -> dict:
        out = asdict(self)
        out["per_triangle_vartheta"] = [float(v) for v in self.per_triangle_vartheta]
        return out


def triangle_angles(p, q, r) -> tuple[float, float, float]:
    """Interior angles at p, q, r from the law of cosines."""
    p, q, r = (np.asarray(v, dtype=float) for v in (p, q, r))
    a = float(np.hypot(*(q - r)))
    b = float(np.hypot(*(r - p)))
    c = float(np.hypot(*(p - q)))

    def opposite(x, y, z):
        return math.acos(min(1.0, max(-1.0, (y * y + z * z - x * x) / (2 * y * z))))

    return opposite(a, b, c), opposite(b, c, a), opposite(c, a, b)


def triangle_vartheta(diameter, perimeter, inradius):
    """Regularity of a triangle: (4/pi) diam*perim/inradius**2 + 2 diam/inradius.

    The first term is diam*perim over the area of a disk of radius inradius/2.
    """
    return 4 / np.pi * diameter * perimeter / inradius**2 + 2 * diameter / inradius


def c_theta(theta: float) -> float:
    """Upper bound on the regularity constant of triangles with all angles >= theta."""
    if not 0 < theta <= math.pi / 3 + 1e-15:
        raise StructureError(f"theta must lie in (0, pi/3], got {theta}")
    k = 1 / math.tan(theta / 2)
    return 48 / math.pi * k * k + 4 * k


def regularity_constant(complex_: OrientedComplex2) -> RegularityReport:
    if complex_.n_triangles == 0:
        raise StructureError("complex has no triangles")
    meas = measure_complex(complex_)
    per = triangle_vartheta(meas.triangle_diameters, meas.triangle_perimeters, meas.triangle_inradii)
    theta_min = min(min(triangle_angles(*complex_.triangle_points(t))) for t in range(complex_.n_triangles))
    return RegularityReport(
        theta_min=theta_min,
        vartheta=float(per.max()),
        per_triangle_vartheta=per,
        c_theta_bound=c_theta(theta_min),
    )


def diameter_inradius_ratio_bound_check(triangle):
    """Compare diameter/inradius with 2*cot(theta_min/2) for one triangle."""
    p, q, r = triangle
    _, diam, _, inr = triangle_measures(p, q, r)
    theta = min(triangle_angles(p, q, r))
    ratio = diam / inr
    bound = 2 / math.tan(theta / 2)
    return ratio, bound, ratio <= bound + 1e-9


@dataclass(frozen=True)
class DeformationBounds:
    mass_P: float
    mass_boundary_P: float
    mass_Q: float
    mass_R: float
    flat_distance: float


def base_factor(vartheta, variant="classic", m=1, n=0, eps=0.0) -> float:
    if variant == "classic":
        return 4 * vartheta
    if variant in ("single_tight", "tight"):
        if eps <= 0:
            raise StructureError("the tight variant needs eps > 0")
        return (2 + eps) * vartheta
    if variant == "multi":
        if m < 0 or n < 0 or m + n == 0 or eps <= 0:
            raise StructureError("the multi variant needs m, n >= 0 with m + n > 0 and eps > 0")
        return (2 * m + 2 * n + eps) * vartheta
    raise StructureError(f"unknown variant {variant!r}")


def sdt_bounds(
    p: int,
    d: int,
    vartheta: float,
    delta_diam: float,
    mass_T: float,
    mass_bT: float,
    variant: str = "classic",
    m: int = 1,
    n: int = 0,
    eps: float = 0.0,
) -> DeformationBounds:
    """Mass bounds for pushing a d-current onto the d-skeleton of a p-complex.

    ``f`` is the per-step expansion factor: 4*vartheta (classic),
    (2+eps)*vartheta (single current, tight) or (2m+2n+eps)*vartheta when m
    d-currents and n (d+1)-currents are pushed simultaneously.
    """
    if p < d or d < 0:
        raise StructureError(f"need p >= d >= 0, got p={p}, d={d}")
    if min(vartheta, delta_diam, mass_T, mass_bT) < 0:
        raise StructureError("bound inputs must be nonnegative")
    f = base_factor(vartheta, variant, m, n, eps)
    k = p - d
    fk = f**k
    return DeformationBounds(
        mass_P=fk * mass_T + delta_diam * f ** (k + 1) * mass_bT,
        mass_boundary_P=f ** (k + 1) * mass_bT,
        mass_Q=delta_diam * fk * (1 + f) * mass_bT,
        mass_R=delta_diam * fk * mass_T,
        flat_distance=delta_diam * fk * (mass_T + (1 + f) * mass_bT),
    )


def _line_angles(directions) -> np.ndarray:
    d = np.asarray(directions, dtype=float).reshape(-1, 2)
    norms = np.hypot(d[:, 0], d[:, 1])
    if np.any(norms == 0):
        raise StructureError("zero-length edge direction")
    return np.mod(np.arctan2(d[:, 1], d[:, 0]), np.pi)


def grid_angle_set(directions) -> np.ndarray:
    """Sorted distinct angles {phi, phi + pi/2} (mod pi) of the edge lines."""
    phi = _line_angles(directions)
    both = np.mod(np.concatenate([phi, phi + np.pi / 2]), np.pi)
    return _dedup_circular(np.sort(both), np.pi)


def _dedup_circular(sorted_angles, period):
    out = []
    for a in sorted_angles:
        if not out or a - out[-1] > DEDUP_TOL:
            out.append(a)
    if len(out) > 1 and out[0] + period - out[-1] <= DEDUP_TOL:
        out.pop()
    return np.array(out)


def grid_rotation(directions) -> tuple[float, float]:
    """Rotation of a square grid whose lines make angles >= pi/(2N) with every edge.

    N counts the distinct grid-relative angles. The returned rotation is
    the midpoint of the largest gap between edge directions taken modulo
    pi/2, which is optimal among all rotations.
    """
    E = grid_angle_set(directions)
    if len(E) == 0:
        raise StructureError("need at least one edge direction")
    N = len(E)
    quarter = np.pi / 2
    pts = _dedup_circular(np.sort(np.mod(E, quarter)), quarter)
    gaps = np.diff(np.concatenate([pts, [pts[0] + quarter]]))
    i = int(np.argmax(gaps))
    phi = float(np.mod(pts[i] + gaps[i] / 2, quarter))
    return phi, math.pi / (2 * N)


def min_created_angle(phi: float, directions) -> float:
    """Smallest angle between the grid lines {phi, phi + pi/2} and any edge line."""
    ang = _line_angles(directions)
    worst = math.inf
    for g in (phi, phi + math.pi / 2):
        diff = np.mod(ang - g, math.pi)
        worst = min(worst, float(np.minimum(diff, math.pi - diff).min()))
    return worst
