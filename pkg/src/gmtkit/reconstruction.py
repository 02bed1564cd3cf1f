"""Curve reconstruction from a fixed-radius area signature.

Polygons are parameterized by truncated Fourier series of their vertex
coordinates and fitted with a mesh adaptive direct search whose poll
directions come from Householder reflections of Halton points (the
OrthoMADS construction), using the minimal n+1 positive spanning set.
Non-simple or clockwise candidates get an infinite objective.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .area_invariant import Signature, _disk_areas, is_simple, lens_area, signed_area
from .errors import InfeasibleStartError, NoSolutionError, StructureError

log = logging.getLogger(__name__)

ROWS = ("x_cos", "x_sin", "y_cos", "y_sin")
SPECULATIVE_FACTOR = 2.0


@dataclass(frozen=True, eq=False)
class FourierPolygon:
    """Vertex k (k = 1..N) is sum_j of the four coefficient rows at angle 2*pi*j*k/N."""

    coeffs: np.ndarray  # (4, m)
    N: int

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != 4 or c.shape[1] < 1:
            raise StructureError("coefficients must be a 4 x m array with m >= 1")
        if self.N < 3:
            raise StructureError("need at least 3 vertices")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def m(self) -> int:
        return self.coeffs.shape[1]

    @classmethod
    def from_vector(cls, vec, m: int, N: int) -> "FourierPolygon":
        return cls(np.asarray(vec, dtype=float).reshape(4, m), N)

    def vector(self) -> np.ndarray:
        return self.coeffs.ravel().copy()

    def padded(self, m: int) -> "FourierPolygon":
        """Same polygon with zero coefficients for the added harmonics."""
        if m < self.m:
            raise StructureError("padding cannot drop harmonics")
        c = np.zeros((4, m))
        c[:, : self.m] = self.coeffs
        return FourierPolygon(c, self.N)


def _basis(m: int, N: int):
    k = np.arange(1, N + 1)
    ang = 2 * np.pi * np.outer(k, np.arange(m)) / N
    return np.cos(ang), np.sin(ang)


def _vertices(cos, sin, a) -> np.ndarray:
    # harmonics summed in order, so trailing zero harmonics leave every bit unchanged
    out = np.zeros((cos.shape[0], 2))
    for j in range(a.shape[1]):
        out[:, 0] += cos[:, j] * a[0, j] + sin[:, j] * a[1, j]
        out[:, 1] += cos[:, j] * a[2, j] + sin[:, j] * a[3, j]
    return out


def synthesize(fp: FourierPolygon) -> np.ndarray:
    cos, sin = _basis(fp.m, fp.N)
    return _vertices(cos, sin, fp.coeffs)


def feasible(vertices) -> bool:
    return is_simple(vertices) and signed_area(vertices) > 0


class _Objective:
    """Squared signature mismatch with an extreme barrier."""

    def __init__(self, target: Signature, r: float, N: int, m: int):
        if len(target) != N:
            raise StructureError(f"target has {len(target)} values, expected {N}")
        self.target = np.asarray(target.values, dtype=float)
        self.r = float(r)
        self.N = N
        self.m = m
        self.cos, self.sin = _basis(m, N)

    def vertices(self, vec):
        return _vertices(self.cos, self.sin, np.asarray(vec).reshape(4, self.m))

    def __call__(self, vec) -> float:
        v = self.vertices(vec)
        if not feasible(v):
            return math.inf
        g = _disk_areas(v, v, self.r)
        return float(np.sum((g - self.target) ** 2))


def objective(coeffs, target: Signature, r: float, N: int) -> float:
    c = np.asarray(coeffs, dtype=float)
    if c.ndim == 1:
        c = c.reshape(4, -1)
    return _Objective(target, r, N, c.shape[1])(c.ravel())


def best_fit_circle(target: Signature, N: int, r: float | None = None, r_max: float | None = None):
    """Centered regular N-gon whose circumcircle has the target's mean disk area.

    Solves lens_area(R, r, R) = mean(target) for R by bisection. The lens
    area increases with R towards the half disk, so means at or above
    pi*r**2/2 fall back to ``r_max`` with a warning.
    """
    r = float(target.radius if r is None else r)
    mean = float(np.mean(target.values))
    disk = math.pi * r * r
    if mean <= 0 or mean >= disk:
        raise NoSolutionError(f"mean signature {mean} outside (0, pi r^2) for r={r}")
    r_max = 1e6 * r if r_max is None else float(r_max)

    def area(R):
        return lens_area(R, r, R)

    coeffs = np.zeros((4, 2))
    if area(r_max) < mean:
        warnings.warn(
            f"mean signature {mean:.6g} not reached below R_max={r_max:.6g}; using R_max",
            RuntimeWarning,
            stacklevel=2,
        )
        coeffs[0, 1] = coeffs[3, 1] = r_max
        return FourierPolygon(coeffs, N)
    lo, hi = 0.0, r_max
    R = hi
    for _ in range(400):
        R = 0.5 * (lo + hi)
        res = area(R) - mean
        if abs(res) <= 1e-10 * disk:
            break
        if res < 0:
            lo = R
        else:
            hi = R
    coeffs[0, 1] = coeffs[3, 1] = R
    return FourierPolygon(coeffs, N)


def householder_directions(u: np.ndarray) -> np.ndarray:
    """n orthonormal directions and their negated sum, from a point of [0, 1]^n.

    Returns an (n+1, n) array of unit rows forming a minimal positive
    spanning set.
    """
    v = 2 * np.asarray(u, dtype=float) - 1
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        raise ValueError("Halton point at the cube centre has no direction")
    v /= norm
    H = np.eye(len(v)) - 2 * np.outer(v, v)
    last = -H.sum(axis=0)
    last /= np.linalg.norm(last)
    return np.vstack([H, last])


@dataclass
class SearchState:
    incumbent: FourierPolygon
    objective: float
    mesh_size: float
    frame_size: float
    evaluations: int
    halton_index: int
    iterations: int = 0
    history: list = field(default_factory=list)  # incumbent objective after each iteration
    stop_reason: str = ""


class _Halton:
    def __init__(self, n: int, start: int):
        self.sampler = qmc.Halton(d=n, scramble=False)
        self.index = start
        if start:
            self.sampler.fast_forward(start)

    def next_directions(self):
        while True:
            u = self.sampler.random(1)[0]
            self.index += 1
            try:
                return householder_directions(u)
            except ValueError:
                continue


def mads_solve(
    target: Signature,
    r: float,
    N: int,
    m: int,
    initial: FourierPolygon,
    budget: int,
    initial_frame: float | None = None,
    min_mesh: float = 1e-9,
    halton_start: int = 1,
    direction_log: list | None = None,
    order_by_success: bool = True,
) -> SearchState:
    """Minimize the squared signature mismatch over 4*m Fourier coefficients.

    Each iteration polls the 4m+1 directions of one Halton point, scaled
    to the frame size and rounded to the mesh, and stops at the first
    strict improvement. Frame size doubles on success (up to its initial
    value) and halves on failure; mesh size follows as frame**2/frame0.
    ``direction_log`` collects the unit directions of every poll.
    """
    n = 4 * m
    if budget < n + 1:
        raise StructureError(f"budget must allow one full poll ({n + 1} evaluations)")
    if initial.m != m or initial.N != N:
        raise StructureError("initial polygon has the wrong shape")
    f = _Objective(target, r, N, m)
    x = initial.vector()
    if initial_frame is None:
        scale = float(np.abs(x).max()) or 1.0
        initial_frame = 0.005 * scale
    frame0 = float(initial_frame)
    frame = mesh = frame0
    cache: dict[bytes, float] = {}
    evals = 0

    def evaluate(point):
        nonlocal evals
        key = point.tobytes()
        if key not in cache:
            cache[key] = f(point)
            evals += 1
        return cache[key]

    fx = evaluate(x)
    halton = _Halton(n, halton_start)
    state = SearchState(initial, fx, mesh, frame, evals, halton.index)
    first_poll = True
    last_step = None
    success_dir = None
    while True:
        if fx == 0.0:
            state.stop_reason = "exact match"
            break
        if evals >= budget:
            state.stop_reason = "budget"
            break
        if mesh < min_mesh:
            state.stop_reason = "mesh"
            break
        success = False
        if last_step is not None and evals < budget:
            # speculative search: repeat the last successful move, enlarged with the frame
            y = x + SPECULATIVE_FACTOR * last_step
            fy = evaluate(y)
            if fy < fx:
                x, fx = y, fy
                last_step = SPECULATIVE_FACTOR * last_step
                success = True
            else:
                last_step = None
        if not success:
            dirs = halton.next_directions()
            if direction_log is not None:
                direction_log.append(dirs)
            if order_by_success and success_dir is not None:
                # stable sort: most aligned with the last successful move first
                dirs = dirs[np.argsort(-(dirs @ success_dir), kind="stable")]
            steps = mesh * np.round(frame * dirs / mesh)
            for step in steps:
                if not np.any(step):
                    continue
                if evals >= budget:
                    break
                y = x + step
                fy = evaluate(y)
                if fy < fx:
                    x, fx = y, fy
                    last_step = step
                    success_dir = step / np.linalg.norm(step)
                    success = True
                    break
        if first_poll and math.isinf(fx):
            raise InfeasibleStartError("no feasible point in the first poll around an infeasible start")
        first_poll = False
        if success:
            frame = min(2 * frame, frame0)
        else:
            frame = frame / 2
        mesh = frame * frame / frame0
        state.iterations += 1
        state.history.append(fx)
    state.incumbent = FourierPolygon.from_vector(x, m, N)
    state.objective = fx
    state.mesh_size = mesh
    state.frame_size = frame
    state.evaluations = evals
    state.halton_index = halton.index
    return state


def multiresolution_reconstruct(
    target: Signature,
    r: float,
    N: int,
    m_schedule: Sequence[int],
    budget: int,
    initial: FourierPolygon | None = None,
    **kwargs,
) -> list[SearchState]:
    """Run ``mads_solve`` for each m in turn, zero-padding the previous optimum."""
    ms = [int(m) for m in m_schedule]
    if not ms or any(b <= a for a, b in zip(ms, ms[1:])):
        raise StructureError("m schedule must be a nonempty ascending sequence")
    if initial is None:
        if ms[0] < 2:
            raise StructureError("the circle start needs m >= 2")
        initial = best_fit_circle(target, N, r)
    current = initial.padded(ms[0]) if initial.m <= ms[0] else initial
    states = []
    for m in ms:
        current = current.padded(m)
        state = mads_solve(target, r, N, m, current, budget, **kwargs)
        log.info("m=%d objective=%.6g evaluations=%d", m, state.objective, state.evaluations)
        states.append(state)
        current = state.incumbent
    return states


def flower_polygon(N: int = 64, lobes: int = 3, amplitude: float = 0.3) -> np.ndarray:
    """Vertices of r(t) = 1 + amplitude*cos(lobes*t) at t = 2*pi*k/N, k = 1..N."""
    t = 2 * np.pi * np.arange(1, N + 1) / N
    rad = 1 + amplitude * np.cos(lobes * t)
    return np.stack([rad * np.cos(t), rad * np.sin(t)], axis=1)


def ellipse_polygon(N: int = 64, a: float = 1.0, b: float = 0.6) -> np.ndarray:
    t = 2 * np.pi * np.arange(1, N + 1) / N
    return np.stack([a * np.cos(t), b * np.sin(t)], axis=1)


def rigid_alignment_rms(a, b) -> float:
    """RMS vertex distance after the best rotation and translation (Kabsch)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0 = a - a.mean(axis=0)
    b0 = b - b.mean(axis=0)
    u, _, vt = np.linalg.svd(a0.T @ b0)
    d = np.sign(np.linalg.det(u @ vt))
    rot = u @ np.diag([1.0, d]) @ vt
    return float(np.sqrt(np.mean(np.sum((a0 @ rot - b0) ** 2, axis=1))))
