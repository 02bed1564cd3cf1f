"""Multiscale simplicial flat norm as a linear program.

For an integer d-chain T on a planar complex K and a scale ``lam >= 0`` we
minimize ``M(X) + lam * M(S)`` over chains X (dimension d) and S (dimension
d+1) on K with ``T = X + boundary(S)``. Splitting X and S into nonnegative
parts gives the equality-constrained LP

    [I  -I  B  -B] @ (x+, x-, s+, s-) = t

whose matrix is totally unimodular for complexes embedded in the plane, so
any basic optimum is integral.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse

from .complex import Chain, OrientedComplex2, SimplexMeasures, boundary, mass, measure_complex
from .errors import SolverIntegrityError, StructureError
from .simplex import LPStatus, solve_lp

log = logging.getLogger(__name__)

INTEGRALITY_TOL = 1e-7


@dataclass(frozen=True)
class FlatNormProblem:
    complex: OrientedComplex2
    input_chain: Chain
    lam: float = 1.0
    weights: SimplexMeasures | None = None

    def __post_init__(self):
        d = self.input_chain.dimension
        if d not in (0, 1):
            raise StructureError(f"input chain must have dimension 0 or 1, got {d}")
        if d + 1 > self.complex.dimension and not self.input_chain.is_zero():
            raise StructureError(f"complex has no {d + 1}-simplices to fill with")
        if not (self.lam >= 0 and math.isfinite(self.lam)):
            raise StructureError(f"scale must be finite and nonnegative, got {self.lam}")
        n = self.complex.n_simplices(d)
        if self.input_chain.coefficients and max(self.input_chain.coefficients) >= n:
            raise StructureError("input chain references a simplex outside the complex")
        if self.weights is None:
            object.__setattr__(self, "weights", measure_complex(self.complex))

    @property
    def dimension(self) -> int:
        return self.input_chain.dimension

    def with_lambda(self, lam: float) -> "FlatNormProblem":
        return FlatNormProblem(self.complex, self.input_chain, lam, self.weights)


@dataclass(frozen=True, eq=False)
class FlatNormDecomposition:
    """Optimal ``T = X + boundary(S)``.

    ``x_values``/``s_values`` hold the raw LP point. The chains are only
    meaningful when ``is_integral`` is set; otherwise they are zero.
    """

    x_chain: Chain
    s_chain: Chain
    value: float
    is_integral: bool
    lp_iterations: int
    lam: float
    x_mass: float
    s_mass: float
    x_values: np.ndarray
    s_values: np.ndarray


@dataclass(frozen=True)
class LinearProgram:
    cost: np.ndarray
    matrix: sparse.csc_matrix
    rhs: np.ndarray
    n_low: int  # simplices of dimension d
    n_high: int  # simplices of dimension d+1

    @property
    def n_variables(self) -> int:
        return len(self.cost)

    @property
    def n_constraints(self) -> int:
        return self.matrix.shape[0]


def _low_volumes(problem: FlatNormProblem) -> np.ndarray:
    if problem.dimension == 0:
        return np.ones(problem.complex.n_vertices)
    return np.asarray(problem.weights.edge_lengths, dtype=float)


def _high_volumes(problem: FlatNormProblem) -> np.ndarray:
    if problem.dimension == 0:
        return np.asarray(problem.weights.edge_lengths, dtype=float)
    return np.asarray(problem.weights.triangle_areas, dtype=float)


def build_lp(problem: FlatNormProblem) -> LinearProgram:
    d = problem.dimension
    cx = problem.complex
    B = cx.boundary_matrix(d + 1).astype(float)
    n_low = cx.n_simplices(d)
    n_high = cx.n_simplices(d + 1) if d + 1 <= 2 else 0
    I = sparse.identity(n_low, format="csc")
    A = sparse.hstack([I, -I, B, -B], format="csc")
    w_low = _low_volumes(problem)
    w_high = problem.lam * _high_volumes(problem)
    cost = np.concatenate([w_low, w_low, w_high, w_high])
    rhs = problem.input_chain.to_vector(n_low).astype(float)
    return LinearProgram(cost, A, rhs, n_low, n_high)


def _integral_or_none(v: np.ndarray):
    r = np.rint(v)
    if np.all(np.abs(v - r) <= INTEGRALITY_TOL):
        return r.astype(np.int64)
    return None


def solve_flat_norm(problem: FlatNormProblem) -> FlatNormDecomposition:
    """Basic optimal flat norm decomposition with an exact integrality check."""
    lp = build_lp(problem)
    n_low, n_high = lp.n_low, lp.n_high
    t = lp.rhs
    # X = T, S = 0 is feasible: x+ where t >= 0, x- otherwise
    start = np.where(t >= 0, np.arange(n_low), n_low + np.arange(n_low))
    res = solve_lp(lp.cost, lp.matrix, lp.rhs, basis=start)
    if res.status is not LPStatus.OPTIMAL:
        raise SolverIntegrityError(f"flat norm LP ended with status {res.status.value}")

    x = res.x
    xv = x[:n_low] - x[n_low : 2 * n_low]
    sv = x[2 * n_low : 2 * n_low + n_high] - x[2 * n_low + n_high :]
    d = problem.dimension
    xi, si = _integral_or_none(xv), _integral_or_none(sv)
    is_integral = False
    if xi is not None and si is not None:
        X = Chain.from_vector(d, xi)
        S = Chain.from_vector(d + 1, si)
        is_integral = X + boundary(S, problem.complex) == problem.input_chain
        if not is_integral:
            log.warning("rounded LP solution fails T = X + dS")
    if is_integral:
        x_mass, s_mass = _masses(problem, X, S)
    else:
        X, S = Chain.zero(d), Chain.zero(d + 1)
        x_mass = float(np.abs(xv) @ _low_volumes(problem))
        s_mass = float(np.abs(sv) @ _high_volumes(problem))
        log.warning("flat norm LP returned a non-integral basic solution")
    value = x_mass + problem.lam * s_mass
    if abs(value - res.objective) > 1e-9 * max(1.0, abs(value)):
        raise SolverIntegrityError(
            f"recomputed value {value!r} disagrees with LP objective {res.objective!r}"
        )
    return FlatNormDecomposition(
        x_chain=X,
        s_chain=S,
        value=float(value),
        is_integral=bool(is_integral),
        lp_iterations=res.iterations,
        lam=problem.lam,
        x_mass=x_mass,
        s_mass=s_mass,
        x_values=xv,
        s_values=sv,
    )


def _masses(problem: FlatNormProblem, X: Chain, S: Chain) -> tuple[float, float]:
    if X.dimension == 0:
        return mass(X), mass(S, problem.weights)
    return mass(X, problem.weights), mass(S, problem.weights)


def lambda_sweep(problem: FlatNormProblem, lambdas: Sequence[float]):
    """Solve at each scale in ascending ``lambdas``; returns ``(lam, value, decomposition)``."""
    lambdas = [float(l) for l in lambdas]
    if any(l < 0 for l in lambdas) or any(b < a for a, b in zip(lambdas, lambdas[1:])):
        raise StructureError("lambdas must be nonnegative and ascending")
    out = []
    for lam in lambdas:
        dec = solve_flat_norm(problem.with_lambda(lam))
        out.append((lam, dec.value, dec))
    return out


def lambda_breakpoints(problem: FlatNormProblem, lo: float, hi: float, tol: float = 1e-12):
    """Scales in ``[lo, hi]`` where the optimal decomposition changes.

    The optimal value is the lower envelope of the lines ``M(X) + lam*M(S)``
    over vertices of the feasible polytope, hence concave and piecewise
    linear in ``lam``. Breakpoints are found by intersecting the lines of
    the optimal decompositions at the ends of an interval and recursing
    until the intersection point lies on both lines.
    """
    if not 0 <= lo <= hi:
        raise StructureError("need 0 <= lo <= hi")

    def line(lam):
        dec = solve_flat_norm(problem.with_lambda(lam))
        return dec.x_mass, dec.s_mass

    found: list[float] = []

    def recurse(a, la, b, lb, depth):
        (xa, sa), (xb, sb) = la, lb
        if abs(sa - sb) <= tol * max(1.0, sa, sb):
            return
        mid = (xb - xa) / (sa - sb)
        if not (a < mid < b) or depth > 60:
            return
        lm = line(mid)
        vm = lm[0] + mid * lm[1]
        va = xa + mid * sa
        if vm >= va - 1e-9 * max(1.0, abs(va)):
            found.append(mid)
            return
        recurse(a, la, mid, lm, depth + 1)
        recurse(mid, lm, b, lb, depth + 1)

    recurse(lo, line(lo), hi, line(hi), 0)
    return sorted(found)
