import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from cliffpovm.simplex import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    solve_lp,
)


def vertex_optimum(c, A, b):
    """Brute force over basic solutions of ``[A I] (x, s) = b`` (maximise)."""
    m, n = A.shape
    S = np.hstack([A, np.eye(m)])
    cc = np.concatenate([c, np.zeros(m)])
    best = -np.inf
    for cols in itertools.combinations(range(n + m), m):
        B = S[:, list(cols)]
        if abs(np.linalg.det(B)) < 1e-12:
            continue
        xb = np.linalg.solve(B, b)
        if np.all(xb >= -1e-9):
            best = max(best, cc[list(cols)] @ xb)
    return best


def test_textbook():
    lp = LinearProgram([3, 5], A_ub=[[1, 0], [0, 2], [3, 2]], b_ub=[4, 12, 18])
    sol = solve_lp(lp)
    assert sol.optimal
    assert sol.value == pytest.approx(36)
    assert np.allclose(sol.point, [2, 6])
    # complementary slackness: duals of the tight rows reproduce the objective
    assert sol.duals_ub @ lp.b_ub == pytest.approx(36)


def test_vertex_enumeration(rng):
    for k in range(50):
        # up to 6 constraints and 30 variables; keep the basis count enumerable
        m = int(rng.integers(1, 7)) if k % 5 else 2
        n = int(rng.integers(2, 12)) if k % 5 else 30
        A = rng.uniform(0.1, 2, size=(m, n))
        b = rng.uniform(1, 3, size=m)
        c = rng.normal(size=n)
        sol = solve_lp(LinearProgram(c, A_ub=A, b_ub=b))
        assert sol.status == OPTIMAL
        assert sol.value == pytest.approx(vertex_optimum(c, A, b), abs=1e-9)
        assert sol.support_size <= m


def test_against_scipy(rng):
    for _ in range(150):
        n = int(rng.integers(3, 9))
        me, mu = int(rng.integers(0, 3)), int(rng.integers(1, 5))
        A_eq = rng.normal(size=(me, n)) if me else None
        b_eq = A_eq @ rng.uniform(0, 1, n) if me else None
        A_ub = np.vstack([rng.normal(size=(mu, n)), np.ones((1, n))])
        b_ub = np.concatenate([rng.normal(size=mu) + 1, [5.0]])
        c = rng.normal(size=n)
        ref = linprog(-c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, method="highs")
        sol = solve_lp(LinearProgram(c, A_eq, b_eq, A_ub, b_ub))
        if ref.status == 2:
            assert sol.status == INFEASIBLE
            continue
        assert ref.status == 0 and sol.optimal
        assert sol.value == pytest.approx(-ref.fun, abs=1e-8)
        lp = LinearProgram(c, A_eq, b_eq, A_ub, b_ub)
        assert max(lp.residuals(sol.point)) < 1e-9


def test_infeasible():
    lp = LinearProgram([1, 1], A_eq=[[1, 1]], b_eq=[2], A_ub=[[1, 1]], b_ub=[1])
    assert solve_lp(lp).status == INFEASIBLE


def test_unbounded():
    lp = LinearProgram([1, 0], A_ub=[[-1, 1]], b_ub=[1])
    assert solve_lp(lp).status == UNBOUNDED


def test_redundant_equalities():
    lp = LinearProgram([1, 2, 0], A_eq=[[1, 1, 1], [2, 2, 2], [1, 0, 0]], b_eq=[1, 2, 0.25])
    sol = solve_lp(lp)
    assert sol.optimal and sol.value == pytest.approx(0.25 + 2 * 0.75)


def test_degenerate_cycling_example():
    # Beale's example cycles under the largest-coefficient rule
    c = np.array([0.75, -150, 0.02, -6])
    A = np.array([[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]])
    b = np.array([0, 0, 1.0])
    sol = solve_lp(LinearProgram(c, A_ub=A, b_ub=b))
    assert sol.optimal and sol.value == pytest.approx(0.05)


def test_dual_certificate(rng):
    A = rng.uniform(0.5, 2, size=(3, 5))
    b = rng.uniform(1, 2, size=3)
    c = rng.uniform(0, 1, size=5)
    sol = solve_lp(LinearProgram(c, A_ub=A, b_ub=b))
    y = sol.duals_ub
    assert np.all(y >= -1e-12)
    assert np.all(A.T @ y >= c - 1e-9)
    assert y @ b == pytest.approx(sol.value)
    assert sol.max_reduced_cost <= 1e-9


def test_from_constraints_and_validation():
    lp = LinearProgram.from_constraints([1, 1], [([1, 0], 1)], [([0, 1], 2)])
    assert solve_lp(lp).value == pytest.approx(3)
    with pytest.raises(ValueError):
        LinearProgram([1, 1], A_ub=[[1, 1, 1]], b_ub=[1])
    with pytest.raises(ValueError):
        LinearProgram([1], A_ub=[[np.inf]], b_ub=[1])
    with pytest.raises(ValueError):
        LinearProgram([])
