"""Moments of ``S_X = <x|X|x>`` over Clifford orbits and related inequalities.

Traces against symmetric-subspace projectors are evaluated from power sums:
``tr(P_pi A^{(x)4})`` is a product of ``tr(A^|c|)`` over the cycles ``c`` of
``pi``, and summing over ``S_4`` groups permutations by cycle type
(1 identity, 6 transpositions, 8 three-cycles, 3 double transpositions,
6 four-cycles).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels
from .fiducials import beta as _beta
from .fiducials import check_alpha
from .linalg import as_hermitian, num_qubits

# sup of 24 tr(P_Sym4 X^4) / (tr X^2 + tr(X)^2)^2 over nonzero Hermitian X
LEMMA_R1_MAX = 0.6 * (7 + 4 * 2 ** (1 / 3) + 3 * 2 ** (2 / 3))
LEMMA_R1_ARGMAX_Y = 2 ** (1 / 3) - 1
LEMMA_R2_MAX = 9.673
LEMMA_R3_MAX = 5.0 / 81.0 * (95 + 32 * np.sqrt(10))
LEMMA_R4_MAX = 36.0
QPROJ_MAX_QUBITS = 5


@dataclass(frozen=True)
class PowerSums:
    p1: float
    p2: float
    p3: float
    p4: float

    @classmethod
    def of(cls, X) -> "PowerSums":
        return cls.from_eigenvalues(np.linalg.eigvalsh(as_hermitian(X)))

    @classmethod
    def from_eigenvalues(cls, lam) -> "PowerSums":
        lam = np.asarray(lam, dtype=float)
        return cls(*(float(np.sum(lam**k)) for k in range(1, 5)))


def _sym4(p1, p2, p3, p4):
    return (p1**4 + 6 * p1**2 * p2 + 8 * p1 * p3 + 3 * p2**2 + 6 * p4) / 24


def _ps(X) -> PowerSums:
    return X if isinstance(X, PowerSums) else PowerSums.of(X)


def tr_psym2(X) -> float:
    """``tr(P_Sym2 X (x) X) = (tr(X)^2 + tr(X^2)) / 2``."""
    s = _ps(X)
    return (s.p1**2 + s.p2) / 2


def tr_psym4(X) -> float:
    """``tr(P_Sym4 X^(x)4)`` from the power sums of ``X``."""
    s = _ps(X)
    return _sym4(s.p1, s.p2, s.p3, s.p4)


def _pauli_products(X: np.ndarray, n: int) -> np.ndarray:
    # A_k = W_k X for every Pauli, in the (x, z) order of the packed code
    d = 1 << n
    XT = np.ascontiguousarray(X.T)
    out = np.empty((d * d, d, d), dtype=complex)
    for v in range(d * d):
        out[v] = _kernels.pauli_apply_rows(v, n, XT).T
    return out


def tr_psym4_q(X) -> float:
    """``tr(P_Sym4 Q X^(x)4)`` with ``Q = d^-2 sum_k W_k^(x)4``.

    Cost is ``O(d^5)``; supported for ``n <= 5``.
    """
    X = as_hermitian(X)
    d = X.shape[0]
    n = num_qubits(d)
    if n > QPROJ_MAX_QUBITS:
        raise ValueError(f"tr_psym4_q supports n <= {QPROJ_MAX_QUBITS}, got {n}")
    A = _pauli_products(X, n)
    A2 = A @ A
    At = np.swapaxes(A, 1, 2)
    q1 = np.trace(A, axis1=1, axis2=2)
    q2 = np.einsum("kij,kij->k", A, At)
    q3 = np.einsum("kij,kij->k", A2, At)
    q4 = np.einsum("kij,kji->k", A2, A2)
    total = np.sum(_sym4(q1, q2, q3, q4)) / d**2
    return float(total.real)


def second_moment(X, d: int | None = None) -> float:
    """``E[S_X^2]`` for any complex projective 2-design in dimension ``d``."""
    if d is None:
        d = np.shape(X)[0]
    s = _ps(X)
    return (s.p2 + s.p1**2) / ((d + 1) * d)


def design_moment(X, d: int, t: int) -> float:
    """``E[S_X^t]`` for a ``t``-design, ``t <= 4``."""
    s = _ps(X)
    if t == 1:
        return s.p1 / d
    if t == 2:
        return second_moment(s, d)
    if t == 3:
        sym3 = (s.p1**3 + 3 * s.p1 * s.p2 + 2 * s.p3) / 6
        return sym3 / comb(d + 2, 3)
    if t == 4:
        return tr_psym4(s) / comb(d + 3, 4)
    raise ValueError("only t <= 4 is supported")


def clifford_fourth_moment(X, alpha_val: float, d: int | None = None) -> float:
    """Exact ``E[S_X^4]`` over the Clifford orbit of a fiducial with localisation ``alpha_val``."""
    X = as_hermitian(X)
    if d is None:
        d = X.shape[0]
    if d != X.shape[0]:
        raise ValueError("dimension does not match X")
    check_alpha(alpha_val, d)
    b = _beta(alpha_val, d)
    return d / comb(d + 2, 3) * ((alpha_val - b) * tr_psym4_q(X) + b * tr_psym4(X))


def stabilizer_fourth_moment_bound(d: int) -> float:
    """Largest ``E[S_phi^4]`` for pure ``phi`` over the stabilizer orbit."""
    return 30.0 / ((d + 4) * (d + 2) * (d + 1) * d)


def berger_bound(m2: float, m4: float) -> float:
    """``sqrt(m2^3 / m4)``, a lower bound on ``E|S|``."""
    if m2 < 0 or m4 < 0:
        raise ValueError("even moments must be nonnegative")
    if m4 == 0:
        if m2 > 0:
            raise ValueError("inconsistent moments: m4 = 0 with m2 > 0")
        return 0.0
    return float(np.sqrt(m2**3 / m4))


@dataclass(frozen=True)
class LemmaRatios:
    r1: float
    r2: float
    r3: float | None
    r4: float | None
    y: float
    rank: int


def lemma_ratios_from_eigenvalues(lam, rtol: float = 1e-10) -> LemmaRatios:
    """Scale-invariant fourth-moment ratios of a Hermitian matrix with spectrum ``lam``.

    ``r1 = 24 T / (p2 + p1^2)^2`` and ``r2 = 24 T p2 / (p2 + p1^2)^3`` with
    ``T = tr(P_Sym4 X^4)``.  For rank two, ``r3 = 24 ||X||_1^2 T / (p2 + p1^2)^3``
    and ``r4 = (6 ||X||_1^4 p2 + 24 ||X||_1^2 T) / (p2 + p1^2)^3``.
    """
    lam = np.asarray(lam, dtype=float)
    amax = np.max(np.abs(lam)) if lam.size else 0.0
    if amax == 0.0:
        raise ValueError("ratios are undefined for the zero matrix")
    lam = lam / amax
    s = PowerSums.from_eigenvalues(lam)
    T = tr_psym4(s)
    den = s.p2 + s.p1**2
    rank = int(np.sum(np.abs(lam) > rtol))
    r1 = 24 * T / den**2
    r2 = 24 * T * s.p2 / den**3
    r3 = r4 = None
    if rank == 2:
        one = float(np.sum(np.abs(lam)))
        r3 = 24 * one**2 * T / den**3
        r4 = (6 * one**4 * s.p2 + 24 * one**2 * T) / den**3
    return LemmaRatios(r1, r2, r3, r4, abs(s.p1) / np.sqrt(s.p2), rank)


def lemma_ratios(X) -> LemmaRatios:
    return lemma_ratios_from_eigenvalues(np.linalg.eigvalsh(as_hermitian(X)))


def lemma_r1_envelope(y: float) -> float:
    """Rank-free upper bound on ``r1`` as a function of ``y = |tr X| / ||X||_2``."""
    return 3 + (6 + 8 * y - 2 * y**4) / (1 + y**2) ** 2


def near_extremal_spectrum(k: int, y: float = LEMMA_R1_ARGMAX_Y) -> np.ndarray:
    """Spectrum ``(a k, -1, ..., -1)`` whose ``r1`` tends to the envelope at ``y``."""
    if y == 1 or k < y**2:
        raise ValueError("need y != 1 and k >= y^2")
    a = (k + np.sqrt(k * y**2 * (1 + k - y**2))) / (k * (1 - y**2))
    lam = -np.ones(k + 1)
    lam[0] = a * k
    return lam


@dataclass(frozen=True)
class MomentReport:
    m1: float
    m2: float
    m3: float
    m4: float
    berger_lower: float
    mean_abs: float
    std_errors: tuple | None = None
    samples: int | None = None


def moments_of_values(S, exact: bool = True) -> MomentReport:
    """Moments of the sample ``S``; with ``exact=False`` standard errors are attached."""
    S = np.asarray(S, dtype=float)
    pw = [S, S**2, S**3, S**4, np.abs(S)]
    means = [float(np.mean(p)) for p in pw]
    errs = None
    if not exact:
        errs = tuple(float(np.std(p, ddof=1) / np.sqrt(S.size)) for p in pw)
    return MomentReport(
        means[0], means[1], means[2], means[3],
        berger_bound(means[1], means[3]), means[4], errs, S.size,
    )


def expectation_values(states, X) -> np.ndarray:
    """``<x_k|X|x_k>`` for each row ``x_k`` of ``states``."""
    S = np.asarray(states)
    return np.einsum("ki,ij,kj->k", S.conj(), X, S).real


def orbit_moments(orbit, X) -> MomentReport:
    """Exact moments of ``S_X`` over an enumerated orbit (uniform weights)."""
    X = as_hermitian(X)
    return moments_of_values(expectation_values(orbit.states, X))


def relative_error(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale
