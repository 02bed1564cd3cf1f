"""Oriented simplicial 2-complexes in the plane and integer chains on them.

Triangles are stored counterclockwise. Each triangle knows its three edges
together with a sign, chosen so that the signed edges traverse the triangle
boundary counterclockwise. Edges keep the (tail, head) orientation they were
given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy import sparse

from .errors import DegenerateSimplexError, StructureError

DEGENERACY_TOL = 1e-14


class Point2(NamedTuple):
    x: float
    y: float

    @classmethod
    def of(cls, x, y) -> "Point2":
        x, y = float(x), float(y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise StructureError(f"non-finite coordinate ({x}, {y})")
        return cls(x, y)


def _signed_area2(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class OrientedComplex2:
    """A planar simplicial complex of dimension at most two.

    Use :meth:`build` rather than the constructor; it validates the input,
    flips clockwise triangles and fills in the triangle/edge incidence.
    """

    vertices: np.ndarray  # (V, 2) float
    edges: np.ndarray  # (E, 2) int, (tail, head)
    triangles: np.ndarray  # (T, 3) int, counterclockwise
    triangle_edges: np.ndarray  # (T, 3) edges a->b, b->c, c->a
    triangle_signs: np.ndarray  # (T, 3) +1/-1
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def build(cls, vertices, edges=(), triangles=()) -> "OrientedComplex2":
        """Validate and assemble a complex.

        Triangle edges missing from ``edges`` are appended (oriented from the
        lower to the higher vertex index), so a complex can be given by its
        triangles alone.
        """
        verts = np.array([Point2.of(*p) for p in vertices], dtype=float).reshape(-1, 2)
        nv = len(verts)

        edge_list: list[tuple[int, int]] = []
        edge_index: dict[frozenset, int] = {}
        for e in edges:
            tail, head = (int(v) for v in e)
            if not (0 <= tail < nv and 0 <= head < nv):
                raise StructureError(f"edge ({tail}, {head}) references a missing vertex")
            if tail == head:
                raise StructureError(f"edge ({tail}, {head}) has equal endpoints")
            key = frozenset((tail, head))
            if key in edge_index:
                raise StructureError(f"duplicate edge ({tail}, {head})")
            edge_index[key] = len(edge_list)
            edge_list.append((tail, head))

        tri_list: list[tuple[int, int, int]] = []
        seen: set[frozenset] = set()
        for t in triangles:
            a, b, c = (int(v) for v in t)
            if not all(0 <= v < nv for v in (a, b, c)):
                raise StructureError(f"triangle ({a}, {b}, {c}) references a missing vertex")
            if len({a, b, c}) != 3:
                raise StructureError(f"triangle ({a}, {b}, {c}) repeats a vertex")
            key = frozenset((a, b, c))
            if key in seen:
                raise StructureError(f"duplicate triangle ({a}, {b}, {c})")
            seen.add(key)
            area2 = _signed_area2(verts[a], verts[b], verts[c])
            diam2 = max(
                float(np.sum((verts[a] - verts[b]) ** 2)),
                float(np.sum((verts[b] - verts[c]) ** 2)),
                float(np.sum((verts[c] - verts[a]) ** 2)),
            )
            if abs(area2) / 2 <= DEGENERACY_TOL * diam2:
                raise DegenerateSimplexError(f"triangle ({a}, {b}, {c}) is degenerate")
            if area2 < 0:
                b, c = c, b
            tri_list.append((a, b, c))

        tri_edges = np.zeros((len(tri_list), 3), dtype=np.int64)
        tri_signs = np.zeros((len(tri_list), 3), dtype=np.int64)
        for ti, (a, b, c) in enumerate(tri_list):
            # counterclockwise traversal a->b, b->c, c->a
            for k, (u, v) in enumerate(((a, b), (b, c), (c, a))):
                key = frozenset((u, v))
                if key not in edge_index:
                    edge_index[key] = len(edge_list)
                    edge_list.append((min(u, v), max(u, v)))
                ei = edge_index[key]
                tri_edges[ti, k] = ei
                tri_signs[ti, k] = 1 if edge_list[ei] == (u, v) else -1

        return cls(
            vertices=_frozen(verts),
            edges=_frozen(np.array(edge_list, dtype=np.int64).reshape(-1, 2)),
            triangles=_frozen(np.array(tri_list, dtype=np.int64).reshape(-1, 3)),
            triangle_edges=_frozen(tri_edges),
            triangle_signs=_frozen(tri_signs),
        )

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def dimension(self) -> int:
        if self.n_triangles:
            return 2
        return 1 if self.n_edges else 0

    def n_simplices(self, dim: int) -> int:
        if dim == 0:
            return self.n_vertices
        if dim == 1:
            return self.n_edges
        if dim == 2:
            return self.n_triangles
        raise StructureError(f"no simplices of dimension {dim}")

    def edge_index(self, u: int, v: int) -> int:
        """Index of the edge joining ``u`` and ``v`` (in either orientation)."""
        lookup = self._cache.get("edge_lookup")
        if lookup is None:
            lookup = {frozenset(map(int, e)): i for i, e in enumerate(self.edges)}
            self._cache["edge_lookup"] = lookup
        try:
            return lookup[frozenset((int(u), int(v)))]
        except KeyError:
            raise StructureError(f"no edge between {u} and {v}") from None

    def boundary_matrix(self, dim: int) -> sparse.csc_matrix:
        """Signed incidence matrix mapping ``dim``-chains to ``dim-1``-chains."""
        key = f"d{dim}"
        if key in self._cache:
            return self._cache[key]
        if dim == 1:
            ne = self.n_edges
            rows = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
            cols = np.concatenate([np.arange(ne), np.arange(ne)])
            vals = np.concatenate([np.ones(ne, np.int64), -np.ones(ne, np.int64)])
            shape = (self.n_vertices, ne)
        elif dim == 2:
            nt = self.n_triangles
            rows = self.triangle_edges.ravel()
            cols = np.repeat(np.arange(nt), 3)
            vals = self.triangle_signs.ravel()
            shape = (self.n_edges, nt)
        else:
            raise StructureError(f"no boundary matrix for dimension {dim}")
        mat = sparse.csc_matrix((vals, (rows, cols)), shape=shape, dtype=np.int64)
        self._cache[key] = mat
        return mat

    def triangle_points(self, ti: int) -> np.ndarray:
        return self.vertices[self.triangles[ti]]


@dataclass(frozen=True)
class Chain:
    """Sparse integer chain: ``coefficients`` maps simplex index to a nonzero int."""

    dimension: int
    coefficients: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.dimension not in (0, 1, 2):
            raise StructureError(f"chain dimension must be 0, 1 or 2, got {self.dimension}")
        clean = {}
        for k, v in self.coefficients.items():
            if isinstance(v, float):
                if not v.is_integer():
                    raise StructureError(f"non-integer coefficient {v} on simplex {k}")
            v = int(v)
            k = int(k)
            if k < 0:
                raise StructureError(f"negative simplex index {k}")
            if v:
                clean[k] = v
        object.__setattr__(self, "coefficients", MappingProxyType(dict(sorted(clean.items()))))

    @classmethod
    def zero(cls, dimension: int) -> "Chain":
        return cls(dimension, {})

    @classmethod
    def from_vector(cls, dimension: int, vec: Iterable[int]) -> "Chain":
        return cls(dimension, {i: int(v) for i, v in enumerate(vec) if v})

    def to_vector(self, size: int) -> np.ndarray:
        if self.coefficients and max(self.coefficients) >= size:
            raise StructureError(
                f"simplex index {max(self.coefficients)} out of range for size {size}"
            )
        vec = np.zeros(size, dtype=object if self._needs_object() else np.int64)
        for k, v in self.coefficients.items():
            vec[k] = v
        return vec

    def _needs_object(self) -> bool:
        return any(abs(v) >= 2**62 for v in self.coefficients.values())

    def is_zero(self) -> bool:
        return not self.coefficients

    def __len__(self) -> int:
        return len(self.coefficients)

    def items(self):
        return self.coefficients.items()

    def _check(self, other: "Chain"):
        if not isinstance(other, Chain):
            return NotImplemented
        if other.dimension != self.dimension:
            raise StructureError("cannot combine chains of different dimension")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        out = dict(self.coefficients)
        for k, v in other.coefficients.items():
            out[k] = out.get(k, 0) + v
        return Chain(self.dimension, out)

    def __neg__(self) -> "Chain":
        return Chain(self.dimension, {k: -v for k, v in self.coefficients.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, k: int) -> "Chain":
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        return Chain(self.dimension, {i: int(k) * v for i, v in self.coefficients.items()})

    __rmul__ = __mul__


def _check_chain(chain: Chain, complex_: OrientedComplex2) -> None:
    n = complex_.n_simplices(chain.dimension)
    for k in chain.coefficients:
        if k >= n:
            raise StructureError(
                f"simplex index {k} out of range for dimension {chain.dimension} (size {n})"
            )


def boundary(chain: Chain, complex_: OrientedComplex2) -> Chain:
    """Apply the signed incidence matrix. The boundary of a 0-chain is the zero 0-chain."""
    _check_chain(chain, complex_)
    if chain.dimension == 0:
        return Chain.zero(0)
    out: dict[int, int] = {}
    if chain.dimension == 1:
        for e, c in chain.items():
            tail, head = complex_.edges[e]
            out[int(head)] = out.get(int(head), 0) + c
            out[int(tail)] = out.get(int(tail), 0) - c
    else:
        for t, c in chain.items():
            for e, s in zip(complex_.triangle_edges[t], complex_.triangle_signs[t]):
                out[int(e)] = out.get(int(e), 0) + int(s) * c
    return Chain(chain.dimension - 1, out)


@dataclass(frozen=True, eq=False)
class SimplexMeasures:
    edge_lengths: np.ndarray
    triangle_areas: np.ndarray
    triangle_diameters: np.ndarray
    triangle_perimeters: np.ndarray
    triangle_inradii: np.ndarray

    def volumes(self, dim: int) -> np.ndarray:
        if dim == 1:
            return self.edge_lengths
        if dim == 2:
            return self.triangle_areas
        raise StructureError(f"no volumes stored for dimension {dim}")


def triangle_measures(p, q, r) -> tuple[float, float, float, float]:
    """(area, diameter, perimeter, inradius) of a planar triangle."""
    p, q, r = (np.asarray(v, dtype=float) for v in (p, q, r))
    a = float(np.hypot(*(q - r)))
    b = float(np.hypot(*(r - p)))
    c = float(np.hypot(*(p - q)))
    area = abs(_signed_area2(p, q, r)) / 2
    diam = max(a, b, c)
    if area <= DEGENERACY_TOL * diam * diam:
        raise DegenerateSimplexError("degenerate triangle")
    perim = a + b + c
    return area, diam, perim, 2 * area / perim


def measure_complex(complex_: OrientedComplex2) -> SimplexMeasures:
    cached = complex_._cache.get("measures")
    if cached is not None:
        return cached
    v = complex_.vertices
    e = complex_.edges
    lengths = np.hypot(*(v[e[:, 1]] - v[e[:, 0]]).T) if len(e) else np.zeros(0)
    tri = complex_.triangles
    if len(tri):
        p, q, r = v[tri[:, 0]], v[tri[:, 1]], v[tri[:, 2]]
        sides = np.stack(
            [np.hypot(*(q - r).T), np.hypot(*(r - p).T), np.hypot(*(p - q).T)], axis=1
        )
        areas = np.abs(
            (q[:, 0] - p[:, 0]) * (r[:, 1] - p[:, 1]) - (q[:, 1] - p[:, 1]) * (r[:, 0] - p[:, 0])
        ) / 2
        diam = sides.max(axis=1)
        if np.any(areas <= DEGENERACY_TOL * diam**2):
            raise DegenerateSimplexError("complex contains a degenerate triangle")
        perim = sides.sum(axis=1)
        inradii = 2 * areas / perim
    else:
        areas = diam = perim = inradii = np.zeros(0)
    out = SimplexMeasures(
        *(_frozen(np.asarray(a, dtype=float)) for a in (lengths, areas, diam, perim, inradii))
    )
    complex_._cache["measures"] = out
    return out


def mass(chain: Chain, measures: SimplexMeasures | None = None) -> float:
    """Sum of |coefficient| times simplex volume; vertices have unit volume."""
    if chain.dimension == 0:
        return float(sum(abs(c) for c in chain.coefficients.values()))
    if measures is None:
        raise StructureError("mass of a 1- or 2-chain needs SimplexMeasures")
    vol = measures.volumes(chain.dimension)
    total = 0.0
    for k, c in chain.items():
        if k >= len(vol):
            raise StructureError(f"simplex index {k} out of range")
        total += abs(c) * float(vol[k])
    return total


def strip_complex(n: int, side: float = 2.0):
    """Chain of ``n`` rhombi, each made of two equilateral triangles, from A to B.

    Returns ``(complex, top, bottom)``: ``top`` is the upper zigzag path from
    A=(0, 0) to B=(n*side*sqrt(3), 0) and ``bottom`` the lower one, which has
    the same mass and differs from ``top`` by the boundary of all triangles.
    """
    if n < 1:
        raise StructureError("strip needs n >= 1")
    h = side / 2
    w = side * math.sqrt(3) / 2
    verts = [(0.0, 0.0)]
    triangles = []
    top_path = []
    bottom_path = []
    for i in range(n):
        left = 3 * i
        x0 = verts[left][0]
        verts += [(x0 + w, h), (x0 + w, -h), (x0 + 2 * w, 0.0)]
        top, bot, right = left + 1, left + 2, left + 3
        triangles += [(left, top, bot), (top, bot, right)]
        top_path += [(left, top), (top, right)]
        bottom_path += [(left, bot), (bot, right)]
    edges = []
    for i in range(n):
        left = 3 * i
        top, bot, right = left + 1, left + 2, left + 3
        edges += [(left, top), (left, bot), (top, bot), (top, right), (bot, right)]
    cx = OrientedComplex2.build(verts, edges, triangles)
    top_chain = Chain(1, {cx.edge_index(u, v): 1 for u, v in top_path})
    bottom_chain = Chain(1, {cx.edge_index(u, v): 1 for u, v in bottom_path})
    return cx, top_chain, bottom_chain


def path_chain(complex_: OrientedComplex2, path: Sequence[int], closed: bool = False) -> Chain:
    """1-chain following the vertex sequence ``path`` (edges oriented along it)."""
    pairs = list(zip(path[:-1], path[1:]))
    if closed:
        pairs.append((path[-1], path[0]))
    out: dict[int, int] = {}
    for u, v in pairs:
        e = complex_.edge_index(u, v)
        s = 1 if tuple(complex_.edges[e]) == (u, v) else -1
        out[e] = out.get(e, 0) + s
    return Chain(1, out)


def delaunay_complex(points) -> OrientedComplex2:
    """Delaunay triangulation of a planar point set as a complex.

    Slivers that fail the degeneracy test are dropped.
    """
    from scipy.spatial import Delaunay

    pts = np.asarray(points, dtype=float)
    tri = Delaunay(pts)
    keep = []
    for s in tri.simplices:
        p, q, r = pts[s]
        area = abs(_signed_area2(p, q, r)) / 2
        diam2 = max(np.sum((p - q) ** 2), np.sum((q - r) ** 2), np.sum((r - p) ** 2))
        if area > 1e-9 * diam2:
            keep.append(tuple(int(v) for v in s))
    return OrientedComplex2.build(pts, (), keep)


def circle_ngon_complex(n: int, fine: int = 256, radius: float = 1.0):
    """Triangulated caps between a fine polygonal circle and an inscribed n-gon.

    ``fine`` must be a multiple of ``n``; the n-gon uses every ``fine // n``-th
    circle vertex. Each cap is fanned from its first vertex. Returns
    ``(complex, circle, ngon)``, both chains oriented clockwise.
    """
    if n < 3 or fine % n or fine // n < 2:
        raise StructureError("fine must be a multiple of n with at least 2 steps per cap")
    k = fine // n
    ang = 2 * np.pi * np.arange(fine) / fine
    verts = np.stack([radius * np.cos(ang), radius * np.sin(ang)], axis=1)
    triangles = []
    for c in range(n):
        base = c * k
        for i in range(1, k):
            triangles.append((base, (base + i) % fine, (base + i + 1) % fine))
    cx = OrientedComplex2.build(verts, (), triangles)
    cw = list(range(fine))[::-1]
    circle = path_chain(cx, cw, closed=True)
    ngon = path_chain(cx, [(n - 1 - i) * k for i in range(n)], closed=True)
    return cx, circle, ngon
