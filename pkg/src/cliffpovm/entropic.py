"""Entropies, moment-constrained linear programs and entropic relations.

The uncertainty pipeline bounds ``E[S^a]`` for ``S = <x|phi|x>`` over all
densities on ``[0, 1]`` that reproduce the known moments of a design (or of
the stabilizer orbit), discretised on a grid.  With ``a = 1 + eps`` the
optimum ``lambda_a`` gives the average-entropy bound
``log2(d lambda_a) / (1 - a)``.

The LP is solved in the rescaled variable ``u = d x`` with each column
divided by ``max(1, u^4)``.  In that form the moment targets are all of order
one even at ``d = 2^20``, where the literal ``x`` form spans about 24 orders
of magnitude.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from math import factorial

import numpy as np

from .clifford import enumerate_stabilizer_states, stabilizer_count
from .linalg import as_state, num_qubits
from .moments import stabilizer_fourth_moment_bound
from .simplex import LinearProgram, solve_lp

DEFAULT_RENYI_ORDER = 1.1
DEFAULT_GRID_SIZE = 2001
GEOMETRIC_XMIN = 1e-9
AUTO_GEOMETRIC_FROM = 10  # qubits


class LpInfeasibleError(RuntimeError):
    """The discretised moment LP has no feasible point."""


def _check_distribution(p, tol: float = 1e-9) -> np.ndarray:
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0:
        raise ValueError("empty distribution")
    if np.any(p < -tol):
        raise ValueError("probabilities must be nonnegative")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    return np.clip(p, 0.0, None)


def shannon(p) -> float:
    """Shannon entropy in bits, with ``0 log 0 = 0``."""
    p = _check_distribution(p)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def renyi(p, order: float) -> float:
    """Rényi entropy of order ``order`` in bits (``order != 1``; ``np.inf`` allowed)."""
    p = _check_distribution(p)
    if order < 0:
        raise ValueError("Rényi order must be nonnegative")
    if order == 1:
        raise ValueError("order 1 is the Shannon entropy; call shannon()")
    nz = p[p > 0]
    if order == 0:
        return float(np.log2(nz.size))
    if order == np.inf:
        return float(-np.log2(nz.max()))
    return float(np.log2(np.sum(nz**order)) / (1 - order))


def relative_entropy(p, q) -> float:
    """``D(p || q)`` in bits; ``inf`` (with a warning) when ``p`` is not dominated by ``q``."""
    p = _check_distribution(p)
    q = _check_distribution(q)
    if p.shape != q.shape:
        raise ValueError("distributions have different lengths")
    m = p > 0
    if np.any(q[m] == 0):
        warnings.warn("relative entropy is infinite: q vanishes where p does not", RuntimeWarning)
        return math.inf
    return float(np.sum(p[m] * np.log2(p[m] / q[m])))


class DesignLevel(str, Enum):
    DESIGN2 = "design2"
    DESIGN3 = "design3"
    DESIGN4 = "design4"
    STABILIZER = "stabilizer"

    @property
    def equality_order(self) -> int:
        return {"design2": 2, "design3": 3, "design4": 4, "stabilizer": 3}[self.value]

    @classmethod
    def parse(cls, s) -> "DesignLevel":
        if isinstance(s, cls):
            return s
        try:
            return cls(str(s).strip().lower())
        except ValueError:
            raise ValueError(f"unknown design level {s!r}") from None


def design_moment_pure(d: int, k: int) -> float:
    """``E[S^k]`` for a pure state and a ``k``-design: ``k! / (d (d+1) ... (d+k-1))``."""
    return factorial(k) / math.prod(d + j for j in range(k))


@dataclass(frozen=True)
class GridSpec:
    kind: str = "auto"
    size: int = DEFAULT_GRID_SIZE
    xmin: float = GEOMETRIC_XMIN

    def __post_init__(self):
        if self.kind not in ("uniform", "geometric", "auto"):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        if self.size < 100:
            raise ValueError("grid needs at least 100 points")
        if not 0 < self.xmin < 1:
            raise ValueError("xmin must lie in (0, 1)")

    def resolve(self, d: int) -> "GridSpec":
        if self.kind != "auto":
            return self
        kind = "geometric" if num_qubits(d) >= AUTO_GEOMETRIC_FROM else "uniform"
        return GridSpec(kind, self.size, self.xmin)

    def points(self, d: int) -> np.ndarray:
        g = self.resolve(d)
        if g.kind == "uniform":
            return np.linspace(0.0, 1.0, g.size)
        return np.concatenate([[0.0], np.logspace(np.log10(g.xmin), 0.0, g.size - 1)])

    def label(self, d: int) -> str:
        g = self.resolve(d)
        return f"{g.kind}:{g.size}"


def _check_grid(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 100:
        raise ValueError("grid needs at least 100 points")
    if x[0] != 0.0 or x[-1] != 1.0 or np.any(np.diff(x) <= 0):
        raise ValueError("grid must increase strictly from 0 to 1")
    return x


@dataclass
class MomentLP(LinearProgram):
    """Discretised moment problem in the literal ``x`` variables.

    Row order: equality moments ``k = 1 .. t``, then normalisation; the
    stabilizer level adds one fourth-moment inequality row.
    """

    d: int = 0
    level: DesignLevel = DesignLevel.DESIGN2
    renyi_order: float = DEFAULT_RENYI_ORDER
    grid: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def scaled(self) -> tuple[LinearProgram, np.ndarray]:
        """Same problem in ``u = d x`` with column scaling.

        Returns the program and the column scale ``s``; a solution ``v`` maps
        back to ``mu = v / s`` and its value to ``lambda = d**-a * value``.
        """
        d, a = self.d, self.renyi_order
        u = d * self.grid
        s = np.maximum(1.0, u**4)
        t = self.level.equality_order
        A_eq = [u**k / s for k in range(1, t + 1)] + [1.0 / s]
        b_eq = [d**k * design_moment_pure(d, k) for k in range(1, t + 1)] + [1.0]
        A_ub = b_ub = None
        if self.level is DesignLevel.STABILIZER:
            A_ub = [u**4 / s]
            b_ub = [d**4 * stabilizer_fourth_moment_bound(d)]
        return LinearProgram(u**a / s, np.array(A_eq), np.array(b_eq), A_ub, b_ub), s


def build_moment_lp(d: int, level, renyi_order: float = DEFAULT_RENYI_ORDER, grid=None) -> MomentLP:
    """Discretised LP for ``max E[S^a]`` under the moment constraints of ``level``."""
    num_qubits(d)
    level = DesignLevel.parse(level)
    if not 1 < renyi_order < 2:
        raise ValueError("Rényi order must lie strictly between 1 and 2")
    if grid is None:
        grid = GridSpec()
    x = grid.points(d) if isinstance(grid, GridSpec) else np.asarray(grid, dtype=float)
    x = _check_grid(x)
    t = level.equality_order
    A_eq = np.array([x**k for k in range(1, t + 1)] + [np.ones_like(x)])
    b_eq = np.array([design_moment_pure(d, k) for k in range(1, t + 1)] + [1.0])
    A_ub = b_ub = None
    if level is DesignLevel.STABILIZER:
        A_ub = x[None, :] ** 4
        b_ub = np.array([stabilizer_fourth_moment_bound(d)])
    return MomentLP(x**renyi_order, A_eq, b_eq, A_ub, b_ub, d=d, level=level,
                    renyi_order=renyi_order, grid=x)


@dataclass(frozen=True)
class UncertaintyResult:
    d: int
    level: DesignLevel
    renyi_order: float
    grid_size: int
    grid: str
    lambda_alpha: float
    bound_bits: float
    c_of_d: float
    support: tuple = ()

    @property
    def n(self) -> int:
        return num_qubits(self.d)


def uncertainty_bound(d: int, level, renyi_order: float = DEFAULT_RENYI_ORDER,
                      grid=None) -> UncertaintyResult:
    """Solve the moment LP and convert its optimum to an average-entropy bound."""
    if grid is None:
        grid = GridSpec()
    lp = build_moment_lp(d, level, renyi_order, grid)
    prog, s = lp.scaled()
    sol = solve_lp(prog)
    if not sol.optimal:
        raise LpInfeasibleError(
            f"moment LP for d={d}, level={lp.level.value} is {sol.status} on this grid"
        )
    a = renyi_order
    # lambda = d^-a * max E[u^a]; computed in logs to keep precision at large d
    log2_val = math.log2(sol.value)
    log2_lam = log2_val - a * math.log2(d)
    bound = (math.log2(d) + log2_lam) / (1 - a)
    c = log2_val / (a - 1)
    mu = sol.point / s
    support = tuple(float(lp.grid[i]) for i in np.nonzero(mu > 1e-12)[0])
    glabel = grid.label(d) if isinstance(grid, GridSpec) else f"custom:{lp.grid.size}"
    return UncertaintyResult(d, lp.level, a, lp.grid.size, glabel, 2.0**log2_lam, bound, c, support)


def grid_refinement_delta(d: int, level, renyi_order: float = DEFAULT_RENYI_ORDER,
                          grid: GridSpec | None = None) -> float:
    """``c(d)`` on ``grid`` minus ``c(d)`` on a grid with half as many intervals.

    Discretisation error has no known sign, so this is reported as a size
    estimate rather than a one-sided correction.
    """
    grid = GridSpec() if grid is None else grid
    coarse = GridSpec(grid.kind, max(100, (grid.size - 1) // 2 + 1), grid.xmin)
    fine = uncertainty_bound(d, level, renyi_order, grid).c_of_d
    return fine - uncertainty_bound(d, level, renyi_order, coarse).c_of_d


def collision_entropy_bound(d: int) -> float:
    """Average-entropy bound from the second moment alone, ``log2(d+1) - 1``."""
    return math.log2(d + 1) - 1


def basis_distributions(n: int, rho, cache_dir=None) -> np.ndarray:
    """Outcome distributions ``<b_s|rho|b_s>``, shape ``(num_bases, d)``."""
    rho = as_state(rho)
    orbit = enumerate_stabilizer_states(n, cache_dir)
    if rho.shape[0] != orbit.d:
        raise ValueError("state dimension does not match n")
    B = orbit.bases()
    P = np.einsum("bsi,ij,bsj->bs", B.conj(), rho, B).real
    return np.clip(P, 0.0, None)


def exact_average_entropy(n: int, rho, cache_dir=None) -> float:
    """Mean Shannon entropy of ``rho`` measured in every stabilizer basis."""
    if n > 3:
        raise ValueError("exact average entropy is supported for n <= 3")
    P = basis_distributions(n, rho, cache_dir)
    P = P / P.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(P > 0, -P * np.log2(P), 0.0)
    return float(np.mean(terms.sum(axis=1)))


def povm_probabilities(n: int, rho, cache_dir=None) -> np.ndarray:
    """Outcome distribution ``(d/N) <x_k|rho|x_k>`` of the stabilizer POVM."""
    P = basis_distributions(n, rho, cache_dir).ravel()
    return P * (1 << n) / P.size


def povm_entropy(n: int, rho, cache_dir=None) -> float:
    p = povm_probabilities(n, rho, cache_dir)
    return shannon(p / p.sum())


@dataclass(frozen=True)
class CertaintyConstants:
    d: int
    N: int
    mi_lower_bound: float
    entropy_ceiling: float
    design4_mi: float
    design2_mi: float


def certainty_constants(d: int) -> CertaintyConstants:
    n = num_qubits(d)
    N = stabilizer_count(n) if n <= 30 else None
    f = ((d - 1) / d) ** 2
    mi = f / (128 * math.log(2))
    ceiling = math.log2(N) - mi if N is not None else float("nan")
    return CertaintyConstants(
        d, N, mi, ceiling, f / (18 * math.log(2)), 1.0 / (6 * math.log(2) * (d + 1) ** 2)
    )


def mutual_information(ensemble, n: int, cache_dir=None) -> float:
    """Mutual information in bits between a preparation label and the stabilizer POVM outcome.

    ``ensemble`` is a sequence of ``(probability, state)`` pairs; states may be
    vectors or density matrices.
    """
    probs = np.array([float(p) for p, _ in ensemble])
    _check_distribution(probs)
    outs = []
    for _, st in ensemble:
        st = np.asarray(st, dtype=complex)
        rho = np.outer(st, st.conj()) if st.ndim == 1 else st
        q = povm_probabilities(n, rho, cache_dir)
        outs.append(q / q.sum())
    outs = np.array(outs)
    avg = probs @ outs
    return max(0.0, shannon(avg) - float(sum(p * shannon(q) for p, q in zip(probs, outs))))


def is_isotropic(ensemble, atol: float = 1e-9) -> bool:
    """True when the ensemble average is the maximally mixed state."""
    d = None
    avg = 0
    for p, st in ensemble:
        st = np.asarray(st, dtype=complex)
        rho = np.outer(st, st.conj()) if st.ndim == 1 else st
        d = rho.shape[0]
        avg = avg + p * rho
    return d is not None and np.allclose(avg, np.eye(d) / d, atol=atol)


def fig1_rows(n_max: int = 20, renyi_order: float = DEFAULT_RENYI_ORDER,
              grid_size: int = DEFAULT_GRID_SIZE, grid_kind: str = "auto", levels=None):
    """``UncertaintyResult`` for every ``(n, level)`` with ``1 <= n <= n_max``."""
    levels = list(DesignLevel) if levels is None else [DesignLevel.parse(lv) for lv in levels]
    grid = GridSpec(grid_kind, grid_size)
    out = []
    for n in range(1, n_max + 1):
        for lv in levels:
            out.append(uncertainty_bound(1 << n, lv, renyi_order, grid))
    return out
