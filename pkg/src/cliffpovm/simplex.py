"""Dense two-phase simplex for small linear programs.

Maximise ``c @ x`` subject to ``A_eq x = b_eq``, ``A_ub x <= b_ub`` and
``x >= 0``.  Pivoting follows Bland's rule, so the result is deterministic
and cycling cannot occur.  Rows are scaled to unit max-abs coefficient
before solving.  Once a basis is optimal the tableau is rebuilt from the
original data with a direct solve, which removes drift accumulated over
many pivots, and optimality is re-checked on the fresh tableau.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"


@dataclass
class LinearProgram:
    """``max c @ x`` s.t. ``A_eq x = b_eq``, ``A_ub x <= b_ub``, ``x >= 0``."""

    objective: np.ndarray
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    A_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).ravel()
        nv = self.objective.size
        if nv == 0:
            raise ValueError("objective is empty")
        self.A_eq, self.b_eq = _rows(self.A_eq, self.b_eq, nv, "equality")
        self.A_ub, self.b_ub = _rows(self.A_ub, self.b_ub, nv, "inequality")

    @property
    def num_vars(self) -> int:
        return self.objective.size

    @property
    def num_constraints(self) -> int:
        return self.A_eq.shape[0] + self.A_ub.shape[0]

    @classmethod
    def from_constraints(cls, objective, eq_constraints=(), ineq_constraints=()):
        """Build from lists of ``(row, rhs)`` pairs."""
        def split(pairs):
            pairs = list(pairs)
            if not pairs:
                return None, None
            return np.array([p[0] for p in pairs], dtype=float), np.array([p[1] for p in pairs], dtype=float)

        A_eq, b_eq = split(eq_constraints)
        A_ub, b_ub = split(ineq_constraints)
        return cls(objective, A_eq, b_eq, A_ub, b_ub)

    def residuals(self, x) -> tuple[float, float, float]:
        """Max equality violation, max inequality excess, max bound violation."""
        x = np.asarray(x, dtype=float)
        eq = float(np.max(np.abs(self.A_eq @ x - self.b_eq), initial=0.0))
        ub = float(np.max(self.A_ub @ x - self.b_ub, initial=0.0))
        lo = float(max(0.0, -np.min(x, initial=0.0)))
        return eq, max(ub, 0.0), lo


def _rows(A, b, nv, what):
    if A is None:
        if b is not None and np.size(b):
            raise ValueError(f"{what} rhs given without rows")
        return np.zeros((0, nv)), np.zeros(0)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    if A.shape[1] != nv:
        raise ValueError(f"{what} rows have {A.shape[1]} columns, objective has {nv}")
    if A.shape[0] != b.size:
        raise ValueError(f"{what} constraint count {A.shape[0]} != rhs length {b.size}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise ValueError(f"{what} constraints must be finite")
    return A, b


@dataclass
class LpSolution:
    status: str
    value: float = float("nan")
    point: np.ndarray = field(default_factory=lambda: np.zeros(0))
    support_size: int = 0
    basis: tuple = ()
    iterations: int = 0
    duals_eq: np.ndarray | None = None
    duals_ub: np.ndarray | None = None
    max_reduced_cost: float = float("nan")

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Canonical tableau ``[B^-1 A | B^-1 b]`` with a reduced-cost row."""

    def __init__(self, A, b, basis):
        self.A = A
        self.b = b
        self.basis = list(basis)
        self.refresh()

    def refresh(self):
        B = self.A[:, self.basis]
        self.T = np.linalg.solve(B, np.column_stack([self.A, self.b]))

    def reduced_costs(self, c):
        # r_j = c_j - c_B^T B^-1 A_j ; positive entries improve a maximisation
        return c - c[self.basis] @ self.T[:, :-1]

    def pivot(self, row, col):
        T = self.T
        T[row] /= T[row, col]
        others = np.nonzero(T[:, col])[0]
        for r in others:
            if r != row:
                T[r] -= T[r, col] * T[row]
        T[:, col] = 0.0
        T[row, col] = 1.0
        self.basis[row] = col


def _bland(tab: _Tableau, c, allowed, tol, max_iter):
    """Run primal simplex with Bland's rule.  Returns (status, iterations)."""
    it = 0
    while it < max_iter:
        r = tab.reduced_costs(c)
        r[~allowed] = 0.0
        cand = np.nonzero(r > tol)[0]
        if cand.size == 0:
            return OPTIMAL, it
        col = int(cand[0])
        colv = tab.T[:, col]
        rhs = tab.T[:, -1]
        rows = np.nonzero(colv > tol)[0]
        if rows.size == 0:
            return UNBOUNDED, it
        ratios = np.maximum(rhs[rows], 0.0) / colv[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * max(1.0, best)]
        row = int(min(ties, key=lambda i: tab.basis[i]))
        tab.pivot(row, col)
        it += 1
    return ITERATION_LIMIT, it


def solve_lp(problem: LinearProgram, tol: float = 1e-9, max_iter: int = 50_000) -> LpSolution:
    """Solve ``problem``.  Infeasibility and unboundedness are reported in ``status``."""
    p = problem
    nv = p.num_vars
    m_eq, m_ub = p.A_eq.shape[0], p.A_ub.shape[0]
    m = m_eq + m_ub

    # standard form with slacks, rows scaled to unit max-abs coefficient
    A = np.zeros((m, nv + m_ub))
    A[:m_eq, :nv] = p.A_eq
    A[m_eq:, :nv] = p.A_ub
    A[m_eq:, nv:] = np.eye(m_ub)
    b = np.concatenate([p.b_eq, p.b_ub])
    scale = np.max(np.abs(A), axis=1)
    scale[scale == 0] = 1.0
    A /= scale[:, None]
    b = b / scale
    for i in range(m):
        if not np.any(A[i]):
            if abs(b[i]) > tol:
                return LpSolution(INFEASIBLE)
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1
    nx = A.shape[1]

    # phase one: artificial variable per row
    A1 = np.hstack([A, np.eye(m)])
    tab = _Tableau(A1, b, range(nx, nx + m))
    c1 = np.concatenate([np.zeros(nx), -np.ones(m)])
    allowed = np.ones(nx + m, dtype=bool)
    status, it1 = _bland(tab, c1, allowed, tol * 1e-2, max_iter)
    if status == ITERATION_LIMIT:
        return LpSolution(ITERATION_LIMIT, iterations=it1)
    infeas = float(np.sum(tab.T[:, -1][np.array(tab.basis) >= nx]))
    if infeas > tol * max(1.0, float(np.max(b, initial=0.0))):
        return LpSolution(INFEASIBLE, iterations=it1)

    # drive remaining artificials out of the basis, dropping redundant rows
    keep = np.ones(m, dtype=bool)
    for row in range(m):
        if tab.basis[row] < nx:
            continue
        cols = np.nonzero(np.abs(tab.T[row, :nx]) > 1e-9)[0]
        if cols.size:
            tab.pivot(row, int(cols[0]))
        else:
            keep[row] = False
    basis = [tab.basis[i] for i in range(m) if keep[i]]
    A2, b2 = A[keep], b[keep]

    c2 = np.concatenate([p.objective, np.zeros(m_ub)])
    allowed = np.ones(nx, dtype=bool)
    tab = _Tableau(A2, b2, basis)
    total = it1
    for _ in range(5):
        status, it = _bland(tab, c2, allowed, tol * 1e-2, max_iter - total)
        total += it
        if status != OPTIMAL:
            return LpSolution(status, iterations=total)
        tab.refresh()
        if np.all(tab.T[:, -1] >= -tol) and np.all(tab.reduced_costs(c2) <= tol):
            break
    else:
        return LpSolution(ITERATION_LIMIT, iterations=total)

    x = np.zeros(nx)
    x[tab.basis] = np.maximum(tab.T[:, -1], 0.0)
    point = x[:nv]
    B = A2[:, tab.basis]
    y_kept = np.linalg.solve(B.T, c2[tab.basis])
    y = np.zeros(m)
    y[keep] = y_kept
    y = y * np.where(flip, -1.0, 1.0) / scale
    rc = tab.reduced_costs(c2)
    return LpSolution(
        OPTIMAL,
        float(p.objective @ point),
        point,
        int(np.sum(point > tol)),
        tuple(int(j) for j in tab.basis),
        total,
        y[:m_eq],
        y[m_eq:],
        float(np.max(rc, initial=0.0)),
    )
