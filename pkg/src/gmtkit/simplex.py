"""Revised simplex method for standard-form linear programs.

    minimize    c @ x
    subject to  A @ x == b,  x >= 0

Pivoting follows Bland's rule (lowest-index entering column, lowest-index
leaving variable on ratio ties), so the method terminates on degenerate
problems, and the returned point is always a basic solution. The basis
inverse is kept explicitly with product-form updates and refactorized
periodically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import sparse

RATIO_TOL = 1e-10
COST_TOL = 1e-10
REFACTOR_EVERY = 64


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


@dataclass
class LPResult:
    status: LPStatus
    x: np.ndarray | None
    objective: float
    basis: np.ndarray | None
    iterations: int


class _Tableau:
    """Basis bookkeeping for one phase."""

    def __init__(self, A, b, c, basis):
        self.A = sparse.csc_matrix(A)  # column() reads row indices straight from CSC storage
        self.b = b
        self.c = c
        self.m = A.shape[0]
        self.basis = np.array(basis, dtype=np.int64)
        self.iterations = 0
        self.refactor()

    def refactor(self):
        B = self.A[:, self.basis].toarray()
        self.Binv = np.linalg.inv(B)
        self.xB = self.Binv @ self.b
        self.since_refactor = 0

    def column(self, j):
        col = self.A[:, [j]]
        return self.Binv[:, col.indices] @ col.data

    def run(self, max_iter):
        """Pivot to optimality under Bland's rule. Returns an LPStatus."""
        A, c = self.A, self.c
        scale = max(1.0, float(np.abs(c).max(initial=0.0)))
        while True:
            if self.iterations >= max_iter:
                return LPStatus.ITERATION_LIMIT
            y = c[self.basis] @ self.Binv
            reduced = c - A.T @ y
            reduced[self.basis] = 0.0
            candidates = np.flatnonzero(reduced < -COST_TOL * scale)
            if len(candidates) == 0:
                return LPStatus.OPTIMAL
            enter = int(candidates[0])
            d = self.column(enter)
            pos = d > RATIO_TOL
            if not pos.any():
                return LPStatus.UNBOUNDED
            ratios = np.full(self.m, np.inf)
            ratios[pos] = np.maximum(self.xB[pos], 0.0) / d[pos]
            best = ratios.min()
            ties = np.flatnonzero(ratios <= best + RATIO_TOL * max(1.0, best))
            leave_row = int(ties[np.argmin(self.basis[ties])])
            self.pivot(leave_row, enter, d)
            self.iterations += 1

    def pivot(self, row, enter, d):
        theta = max(self.xB[row], 0.0) / d[row]
        self.xB -= theta * d
        self.xB[row] = theta
        piv = self.Binv[row] / d[row]
        self.Binv -= np.outer(d, piv)
        self.Binv[row] = piv
        self.basis[row] = enter
        self.since_refactor += 1
        if self.since_refactor >= REFACTOR_EVERY:
            self.refactor()

    def solution(self, n):
        x = np.zeros(n)
        x[self.basis] = self.xB
        return x


def solve_lp(c, A, b, basis=None, max_iter: int = 100_000) -> LPResult:
    """Solve a standard-form LP and return a basic optimal solution.

    ``basis`` may supply ``m`` column indices forming a primal feasible
    starting basis, which skips phase one. Rows of ``A`` must be linearly
    independent.
    """
    A = sparse.csc_matrix(A, dtype=float)
    c = np.asarray(c, dtype=float)
    b = np.asarray(b, dtype=float).copy()
    m, n = A.shape
    if c.shape != (n,) or b.shape != (m,):
        raise ValueError("dimension mismatch between c, A and b")

    if basis is not None:
        tab = _Tableau(A, b, c, basis)
        if np.any(tab.xB < -1e-9):
            raise ValueError("supplied basis is not primal feasible")
        status = tab.run(max_iter)
        return _result(status, tab, n)

    # phase one with one artificial per row
    flip = b < 0
    signs = np.where(flip, -1.0, 1.0)
    A1 = sparse.diags(signs) @ A
    b1 = np.abs(b)
    A_aux = sparse.hstack([A1, sparse.identity(m, format="csc")], format="csc")
    c_aux = np.concatenate([np.zeros(n), np.ones(m)])
    tab = _Tableau(A_aux, b1, c_aux, np.arange(n, n + m))
    status = tab.run(max_iter)
    if status is LPStatus.ITERATION_LIMIT:
        return _result(status, tab, n)
    if float(c_aux[tab.basis] @ tab.xB) > 1e-8 * max(1.0, float(b1.max(initial=0.0))):
        return LPResult(LPStatus.INFEASIBLE, None, np.nan, None, tab.iterations)

    # drive remaining (zero-level) artificials out of the basis
    for row in range(m):
        if tab.basis[row] < n:
            continue
        e_row = tab.Binv[row]
        alpha = A1.T @ e_row
        alpha[tab.basis[tab.basis < n]] = 0.0
        j = np.flatnonzero(np.abs(alpha) > 1e-9)
        if len(j) == 0:
            raise ValueError("constraint rows are linearly dependent")
        enter = int(j[0])
        tab.pivot(row, enter, tab.column(enter))

    tab2 = _Tableau(A1, b1, c, tab.basis)
    tab2.iterations = tab.iterations
    status = tab2.run(max_iter)
    return _result(status, tab2, n)


def _result(status, tab: _Tableau, n) -> LPResult:
    if status is not LPStatus.OPTIMAL:
        return LPResult(status, None, np.nan, tab.basis.copy(), tab.iterations)
    tab.refactor()
    x = tab.solution(tab.A.shape[1])[:n]
    x[np.abs(x) < 1e-12] = 0.0
    return LPResult(status, x, float(tab.c[:n] @ x), tab.basis.copy(), tab.iterations)
