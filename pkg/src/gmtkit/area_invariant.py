"""Integral area invariant of simple polygons.

``disk_polygon_area`` integrates x dy - y dx around the boundary of
disk ∩ polygon: straight pieces come from polygon edges clipped to the
disk, circular pieces from arcs of the disk boundary that lie inside the
polygon. Arcs are classified by a winding-number test of their midpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NonSimplePolygonError, StructureError

_EPS = np.finfo(float).eps / 2
_CCW_ERRBOUND = (3 + 16 * _EPS) * _EPS
TANGENT_TOL = 1e-14


def _exact_orient(ax, ay, bx, by, cx, cy) -> int:
    ax, ay, bx, by, cx, cy = map(Fraction, (ax, ay, bx, by, cx, cy))
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (det > 0) - (det < 0)


def orient2d(a, b, c) -> np.ndarray:
    """Sign of the orientation determinant of (a, b, c), exact for float input.

    Broadcasts over leading dimensions. A floating-point evaluation is
    accepted when it clears a forward error bound; the rest are recomputed
    with rationals.
    """
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    a, b, c = np.broadcast_arrays(a, b, c)
    l = (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1])
    r = (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])
    det = l - r
    bound = _CCW_ERRBOUND * (np.abs(l) + np.abs(r))
    sign = np.array(np.sign(det), dtype=np.int64)
    unsure = np.abs(det) <= bound
    if np.any(unsure):
        for idx in map(tuple, np.argwhere(unsure)):
            sign[idx] = _exact_orient(*a[idx], *b[idx], *c[idx])
    return sign


def signed_area(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def is_simple(vertices) -> bool:
    """True if the closed polygon has no self-intersections or zero-length edges."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3 or not np.all(np.isfinite(v)):
        return False
    n = len(v)
    a = v
    b = np.roll(v, -1, axis=0)
    if np.any(np.all(a == b, axis=1)):
        return False

    # consecutive edges (a_i, b_i), (b_i, b_{i+1}) must not fold back onto each other
    c = np.roll(b, -1, axis=0)
    turn = orient2d(a, b, c)
    back = np.einsum("ij,ij->i", a - b, c - b) > 0
    if np.any((turn == 0) & back):
        return False
    if n == 3:
        return bool(np.all(turn != 0))

    i, j = np.triu_indices(n, k=2)
    keep = ~((i == 0) & (j == n - 1))
    i, j = i[keep], j[keep]
    p1, p2, q1, q2 = a[i], b[i], a[j], b[j]
    o1 = orient2d(p1, p2, q1)
    o2 = orient2d(p1, p2, q2)
    o3 = orient2d(q1, q2, p1)
    o4 = orient2d(q1, q2, p2)
    cross = (o1 * o2 <= 0) & (o3 * o4 <= 0)
    collinear = (o1 == 0) & (o2 == 0)
    if np.any(collinear & cross):
        k = collinear & cross
        overlap = (
            (np.maximum(p1[k, 0], p2[k, 0]) >= np.minimum(q1[k, 0], q2[k, 0]))
            & (np.maximum(q1[k, 0], q2[k, 0]) >= np.minimum(p1[k, 0], p2[k, 0]))
            & (np.maximum(p1[k, 1], p2[k, 1]) >= np.minimum(q1[k, 1], q2[k, 1]))
            & (np.maximum(q1[k, 1], q2[k, 1]) >= np.minimum(p1[k, 1], p2[k, 1]))
        )
        cross = cross.copy()
        cross[k] = overlap
    return not bool(np.any(cross))


@dataclass(frozen=True, eq=False)
class SimplePolygon:
    """Counterclockwise simple polygon, implicitly closed."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise StructureError("polygon needs at least three (x, y) vertices")
        if not np.all(np.isfinite(v)):
            raise StructureError("polygon has non-finite coordinates")
        if not is_simple(v):
            raise NonSimplePolygonError("polygon is not simple")
        if signed_area(v) <= 0:
            raise NonSimplePolygonError("polygon must be counterclockwise")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)

    @property
    def area(self) -> float:
        return signed_area(self.vertices)


@dataclass(frozen=True, eq=False)
class Signature:
    radius: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).ravel()
        if not self.radius > 0:
            raise StructureError("signature radius must be positive")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


def winding_numbers(points, vertices) -> np.ndarray:
    """Winding number of the closed polygon around each point."""
    q = np.asarray(points, dtype=float).reshape(-1, 2)
    a = np.asarray(vertices, dtype=float)
    b = np.roll(a, -1, axis=0)
    qy = q[:, None, 1]
    up = (a[None, :, 1] <= qy) & (b[None, :, 1] > qy)
    down = (a[None, :, 1] > qy) & (b[None, :, 1] <= qy)
    wn = np.zeros(len(q), dtype=np.int64)
    if not (up.any() or down.any()):
        return wn
    ii, jj = np.nonzero(up | down)
    side = orient2d(a[jj], b[jj], q[ii])
    contrib = np.where(up[ii, jj] & (side > 0), 1, 0) - np.where(down[ii, jj] & (side < 0), 1, 0)
    np.add.at(wn, ii, contrib)
    return wn


def _disk_areas(vertices: np.ndarray, centers: np.ndarray, r: float) -> np.ndarray:
    """Area of disk(center, r) ∩ polygon for each center; no validation."""
    P = np.asarray(vertices, dtype=float)
    C = np.asarray(centers, dtype=float).reshape(-1, 2)
    D = np.roll(P, -1, axis=0) - P  # edge vectors
    K, N = len(C), len(P)
    p = P[None, :, :] - C[:, None, :]  # (K, N, 2)
    a = np.einsum("ij,ij->i", D, D)[None, :]
    b = np.einsum("knj,nj->kn", p, D)
    cc = np.einsum("knj,knj->kn", p, p) - r * r
    disc = b * b - a * cc
    # disc scales like |edge|^2 r^2; tangency counts as no crossing
    live = disc > TANGENT_TOL * a * r * r
    sq = np.sqrt(np.where(live, disc, 0.0))
    q = -(b + np.where(b >= 0, sq, -sq))
    q = np.where(live, q, 1.0)
    t1 = q / a
    t2 = np.where(live, cc / q, 0.0)
    t_lo = np.minimum(t1, t2)
    t_hi = np.maximum(t1, t2)

    # straight pieces: the part of each edge inside the disk is [t_lo, t_hi] ∩ [0, 1]
    s0 = np.clip(t_lo, 0.0, 1.0)
    s1 = np.clip(t_hi, 0.0, 1.0)
    cross_pd = p[..., 0] * D[None, :, 1] - p[..., 1] * D[None, :, 0]
    edge_part = np.where(live & (s1 > s0), 0.5 * (s1 - s0) * cross_pd, 0.0).sum(axis=1)

    # crossing points of the circle with the polygon boundary, as angles
    angles = np.full((K, 2 * N), np.nan)
    for slot, t in enumerate((t_lo, t_hi)):
        ok = live & (t >= 0.0) & (t <= 1.0)
        pts = p + t[..., None] * D[None, :, :]
        ang = np.arctan2(pts[..., 1], pts[..., 0])
        angles[:, slot * N : (slot + 1) * N] = np.where(ok, ang, np.nan)
    angles.sort(axis=1)
    counts = np.sum(~np.isnan(angles), axis=1)

    j = np.arange(2 * N)[None, :]
    valid = j < counts[:, None]
    nxt = np.roll(angles, -1, axis=1)
    # the last crossing wraps around to the first
    last = j == (counts[:, None] - 1)
    first = angles[:, :1] + 2 * np.pi
    nxt = np.where(last, first, nxt)
    span = np.where(valid, nxt - angles, 0.0)
    mid = angles + span / 2

    none = counts == 0
    span[none, 0] = 2 * np.pi
    mid[none, 0] = 0.0
    valid[none, 0] = True

    kk, jj = np.nonzero(valid & (span > 0))
    arc_part = np.zeros(K)
    if len(kk):
        m = mid[kk, jj]
        probe = C[kk] + r * np.stack([np.cos(m), np.sin(m)], axis=1)
        inside = winding_numbers(probe, P) != 0
        np.add.at(arc_part, kk[inside], 0.5 * r * r * span[kk[inside], jj[inside]])
    return edge_part + arc_part


def disk_polygon_area(polygon: SimplePolygon, center, r: float) -> float:
    """Exact area of the open disk of radius ``r`` around ``center`` inside ``polygon``."""
    if not isinstance(polygon, SimplePolygon):
        polygon = SimplePolygon(polygon)
    if not r > 0:
        raise StructureError("radius must be positive")
    return float(_disk_areas(polygon.vertices, np.asarray(center, dtype=float), float(r))[0])


def signature(polygon: SimplePolygon, r: float) -> Signature:
    """Disk areas centred at each vertex, in vertex order."""
    if not isinstance(polygon, SimplePolygon):
        polygon = SimplePolygon(polygon)
    if not r > 0:
        raise StructureError("radius must be positive")
    return Signature(float(r), _disk_areas(polygon.vertices, polygon.vertices, float(r)))


def _crossing_parity(points, vertices) -> np.ndarray:
    """Even-odd ray casting, kept separate from the winding-number code it checks."""
    x, y = points[:, 0], points[:, 1]
    inside = np.zeros(len(points), dtype=bool)
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        straddle = (y1 > y) != (y2 > y)
        if not straddle.any():
            continue
        xint = x1 + (y - y1) * (x2 - x1) / (y2 - y1 if y2 != y1 else 1.0)
        inside ^= straddle & (x < xint)
    return inside


def monte_carlo_area(polygon, center, r: float, samples: int, seed: int = 0, chunk: int = 250_000):
    """Rejection-free uniform sampling of the disk; returns ``(estimate, stderr)``."""
    if samples < 1:
        raise StructureError("need at least one sample")
    verts = np.asarray(getattr(polygon, "vertices", polygon), dtype=float)
    c = np.asarray(center, dtype=float)
    rng = np.random.default_rng(seed)
    hits = 0
    left = samples
    while left:
        k = min(chunk, left)
        rad = r * np.sqrt(rng.random(k))
        ang = 2 * np.pi * rng.random(k)
        pts = c + np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
        hits += int(_crossing_parity(pts, verts).sum())
        left -= k
    frac = hits / samples
    disk = math.pi * r * r
    return disk * frac, disk * math.sqrt(frac * (1 - frac) / samples)


def _x_minus_sin(x: float) -> float:
    if abs(x) < 1e-2:
        x2 = x * x
        return x * x2 / 6 * (1 - x2 / 20 * (1 - x2 / 42 * (1 - x2 / 72)))
    return x - math.sin(x)


def lens_area(d: float, r: float, R: float) -> float:
    """Area of the intersection of disks of radii r and R with centres d apart.

    Sum of the two circular segments, with half-angles taken from
    sin^2(alpha/2) so that thin lenses keep full precision.
    """
    if d >= r + R:
        return 0.0
    if d <= abs(R - r):
        return math.pi * min(r, R) ** 2
    s1 = (R - d + r) * (R + d - r) / (4 * d * r)
    s2 = (r - d + R) * (r + d - R) / (4 * d * R)
    a1 = 2 * math.asin(math.sqrt(min(1.0, max(0.0, s1))))
    a2 = 2 * math.asin(math.sqrt(min(1.0, max(0.0, s2))))
    return 0.5 * r * r * _x_minus_sin(2 * a1) + 0.5 * R * R * _x_minus_sin(2 * a2)


def regular_polygon(n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0) -> np.ndarray:
    ang = phase + 2 * np.pi * np.arange(n) / n
    return np.stack([center[0] + radius * np.cos(ang), center[1] + radius * np.sin(ang)], axis=1)
