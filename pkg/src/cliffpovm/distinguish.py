"""Distinguishing power of Clifford-orbit POVMs.

For a Hermitian ``X`` the POVM image ``M(X)`` has entries
``(d/N) <x_k|X|x_k>`` and its ℓ₁ norm is the bias a measurement in the orbit
can achieve on ``X``.  This module evaluates it exactly over the stabilizer
orbit or by Monte Carlo over uniformly random Cliffords, and collects the
closed-form lower and upper bounds it is compared with.
"""
from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass
from enum import Enum
from threading import Lock

import numpy as np

from .clifford import MAX_QUBITS, enumerate_stabilizer_states, orbit_chunks
from .fiducials import (
    FiducialKind,
    FiducialTag,
    beta,
    characteristic_function_states,
    check_alpha,
    make_fiducial,
    parse_tag,
)
from .linalg import (
    as_hermitian,
    as_pure_state,
    as_state,
    effective_rank,
    numerical_rank,
    projector,
    random_pure_state,
    schatten_norm,
    trace_norm,
)
from .moments import expectation_values, tr_psym4

MIN_MC_SAMPLES = 1000


class PovmMode(str, Enum):
    ENUMERATED = "enumerated_stabilizer"
    MONTE_CARLO = "monte_carlo_orbit"


@dataclass(frozen=True)
class PovmSpec:
    mode: PovmMode
    fiducial: FiducialKind
    n: int
    samples: int | None = None
    seed: int | None = None
    threads: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", PovmMode(self.mode))
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.mode is PovmMode.ENUMERATED:
            if self.n > MAX_QUBITS:
                raise ValueError(f"enumerated mode supports n <= {MAX_QUBITS}")
            if self.fiducial.tag is not FiducialTag.STABILIZER:
                raise ValueError("enumerated mode is only available for the stabilizer orbit")
        else:
            if self.n > MAX_QUBITS:
                raise ValueError(f"Monte-Carlo mode supports n <= {MAX_QUBITS}")
            if self.samples is None or self.samples < MIN_MC_SAMPLES:
                raise ValueError(f"Monte-Carlo mode needs at least {MIN_MC_SAMPLES} samples")
            if self.seed is None:
                raise ValueError("Monte-Carlo mode needs a seed")

    @property
    def d(self) -> int:
        return 1 << self.n

    @classmethod
    def stabilizer(cls, n: int) -> "PovmSpec":
        return cls(PovmMode.ENUMERATED, FiducialKind.stabilizer(), n)

    @classmethod
    def monte_carlo(cls, n: int, fiducial: FiducialKind, samples: int, seed: int,
                    threads: int | None = None) -> "PovmSpec":
        return cls(PovmMode.MONTE_CARLO, fiducial, n, samples, seed, threads)


@dataclass(frozen=True)
class BiasEstimate:
    value: float
    std_error: float
    samples_used: int

    @property
    def exact(self) -> bool:
        return self.std_error == 0.0


_MC_CACHE: OrderedDict = OrderedDict()
_MC_CACHE_SIZE = 4
_MC_LOCK = Lock()


def orbit_states(spec: PovmSpec) -> np.ndarray:
    """State vectors of the POVM: all of them (exact) or the sampled ones (MC).

    Monte-Carlo samples are memoised per ``(n, fiducial, samples, seed)``.
    """
    if spec.mode is PovmMode.ENUMERATED:
        return enumerate_stabilizer_states(spec.n).states
    key = (spec.n, spec.fiducial, spec.samples, spec.seed)
    with _MC_LOCK:
        if key in _MC_CACHE:
            _MC_CACHE.move_to_end(key)
            return _MC_CACHE[key]
    z = make_fiducial(spec.fiducial, spec.n)
    states = np.concatenate(
        orbit_chunks(z, spec.n, spec.samples, spec.seed, lambda s: s, spec.threads), axis=0
    )
    states.setflags(write=False)
    with _MC_LOCK:
        _MC_CACHE[key] = states
        while len(_MC_CACHE) > _MC_CACHE_SIZE:
            _MC_CACHE.popitem(last=False)
    return states


def povm_image(spec: PovmSpec, X) -> np.ndarray:
    """Entries ``(d/N) <x_k|X|x_k>`` over the POVM's states (or samples)."""
    X = as_hermitian(X)
    if X.shape[0] != spec.d:
        raise ValueError(f"X has dimension {X.shape[0]}, POVM acts on {spec.d}")
    S = orbit_states(spec)
    return spec.d * expectation_values(S, X) / S.shape[0]


def povm_image_l1(spec: PovmSpec, X) -> BiasEstimate:
    """``||M(X)||_ℓ1``, exact for the stabilizer orbit, else a Monte-Carlo mean."""
    X = as_hermitian(X)
    if X.shape[0] != spec.d:
        raise ValueError(f"X has dimension {X.shape[0]}, POVM acts on {spec.d}")
    vals = np.abs(expectation_values(orbit_states(spec), X))
    d = spec.d
    if spec.mode is PovmMode.ENUMERATED:
        return BiasEstimate(float(d * np.mean(vals)), 0.0, vals.size)
    se = d * float(np.std(vals, ddof=1)) / math.sqrt(vals.size)
    return BiasEstimate(float(d * np.mean(vals)), se, vals.size)


def helstrom_bias(tau: float, rho, sigma) -> float:
    """Optimal bias ``||tau rho - (1 - tau) sigma||_1 / 2``."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError("prior must lie in [0, 1]")
    rho, sigma = as_state(rho), as_state(sigma)
    if rho.shape != sigma.shape:
        raise ValueError("states have different dimensions")
    return 0.5 * trace_norm(tau * rho - (1 - tau) * sigma)


def helstrom_success(tau: float, rho, sigma) -> float:
    return 0.5 + helstrom_bias(tau, rho, sigma)


def povm_bias(spec: PovmSpec, tau: float, rho, sigma) -> BiasEstimate:
    """Bias reachable with the POVM followed by optimal classical post-processing."""
    rho, sigma = as_state(rho), as_state(sigma)
    est = povm_image_l1(spec, tau * rho - (1 - tau) * sigma)
    return BiasEstimate(0.5 * est.value, 0.5 * est.std_error, est.samples_used)


@dataclass(frozen=True)
class MainBound:
    ratio: float          # lower bound on ||M(X)||_l1 / ||X||_1
    kappa: float          # exact kappa(X, z)
    kappa_ratio: float    # ||X||_2 / (||X||_1 sqrt(kappa)), never below ratio
    regime: str           # "good" when r_eff <= 1/(d alpha), else "bad"
    regime_ratio: float
    r_eff: float


def kappa(X, alpha_val: float, d: int | None = None) -> float:
    """Ratio controlling the Berger-type lower bound ``||M(X)||_l1 >= ||X||_2 / sqrt(kappa)``."""
    X = as_hermitian(X)
    d = X.shape[0] if d is None else d
    check_alpha(alpha_val, d)
    lam = np.linalg.eigvalsh(X)
    one = float(np.sum(np.abs(lam)))
    two2 = float(np.sum(lam**2))
    tr = float(np.sum(lam))
    num = (6 * (d + 1) ** 2 / (d + 2)) * abs(alpha_val - beta(alpha_val, d)) * one**2 * two2**2
    num += 24 * (d + 1) / (d + 4) * two2 * tr_psym4(X)
    return num / (two2 + tr**2) ** 3


def bound_main(X, alpha_val: float, d: int | None = None) -> MainBound:
    """Lower bound ``1 / sqrt((6 d alpha r + 10) r)`` with ``r = r_eff(X)``."""
    X = as_hermitian(X)
    d = X.shape[0] if d is None else d
    if d != X.shape[0]:
        raise ValueError("dimension does not match X")
    check_alpha(alpha_val, d)
    r = effective_rank(X)
    ratio = 1.0 / math.sqrt((6 * d * alpha_val * r + 10) * r)
    k = kappa(X, alpha_val, d)
    kr = schatten_norm(X, 2) / (trace_norm(X) * math.sqrt(k))
    if r <= 1.0 / (d * alpha_val):
        regime, rr = "good", 1.0 / (4 * math.sqrt(r))
    else:
        regime, rr = "bad", 1.0 / (4 * r * math.sqrt(d * alpha_val))
    return MainBound(ratio, k, kr, regime, rr, r)


def bound_generic(X) -> float:
    """Lower ratio ``1 / sqrt(22 r_eff)`` for fiducials with ``alpha <= 6/((d+3)d)``."""
    return 1.0 / math.sqrt(22 * effective_rank(X))


def bound_pure_pair() -> float:
    """Lower ratio for differences of two pure states, valid for every Clifford orbit."""
    return 1.0 / 6.0


def bound_converse_pauli(z, d: int | None = None) -> float:
    """``||M(W)||_l1 / ||W||_1`` for any non-identity Pauli ``W``: ``(||Xi(z)||_1 - 1) / (d^2 - 1)``."""
    z = as_pure_state(z)
    d = z.shape[0] if d is None else d
    if d != z.shape[0]:
        raise ValueError("dimension does not match z")
    l1 = float(np.sum(np.abs(characteristic_function_states(z[None, :])[0])))
    return (l1 - 1.0) / ((d + 1) * (d - 1))


@dataclass(frozen=True)
class Design4Bound:
    ratio: float      # lower bound on ||M(X)||_l1 / ||X||_1
    constant: float   # ratio * sqrt(rank)
    rank: int


def bound_4design(X) -> Design4Bound:
    X = as_hermitian(X)
    rk = numerical_rank(X)
    if rk == 0:
        raise ValueError("bound is undefined for the zero matrix")
    ratio = 0.32 / math.sqrt(rk)
    if rk == 2:
        lam = np.linalg.eigvalsh(X)
        traceless = abs(lam.sum()) <= 1e-10 * np.abs(lam).max()
        ratio = 1 / (2 * math.sqrt(3)) if traceless else 1 / math.sqrt(12.12)
    return Design4Bound(ratio, ratio * math.sqrt(rk), rk)


@dataclass(frozen=True)
class LambdaBounds:
    kind: str
    d: int
    lower: float
    upper: float | None


def lambda_lower_bound(alpha_val: float, d: int) -> float:
    """Worst-case norm constant implied by the main bound at ``r_eff = d``."""
    check_alpha(alpha_val, d)
    return 1.0 / math.sqrt(d * (6 * d * d * alpha_val + 10))


def lambda_summary(kind, d: int) -> LambdaBounds:
    """Known (lower, upper) bounds on the norm constant for a fiducial family."""
    if isinstance(kind, FiducialKind):
        key = kind.tag.value
    else:
        key = str(kind).strip().lower()
        if key != "typical":
            key = parse_tag(key).value
    if key == FiducialTag.STABILIZER.value:
        return LambdaBounds("stabilizer", d, 1 / (math.sqrt(6) * d), 1 / (d + 1))
    if key == FiducialTag.MAGIC.value:
        return LambdaBounds("magic", d, 1 / (4 * d**0.71), 1 / d**0.55)
    if key in ("typical", FiducialTag.HAAR.value):
        return LambdaBounds("typical", d, 1 / math.sqrt(22 * d), None)
    raise ValueError(f"no norm-constant bounds for fiducial kind {kind!r}")


@dataclass(frozen=True)
class PurePairSearch:
    min_ratio: float
    psi: np.ndarray
    phi: np.ndarray
    candidates: int


def worst_pure_pair(n: int, rng: np.random.Generator, trials: int = 200) -> PurePairSearch:
    """Smallest ``||M_stab(psi - phi)||_l1 / ||psi - phi||_1`` found over pure pairs.

    Candidates are random pairs, orthogonal pairs and nearly parallel pairs;
    no optimisation is run.
    """
    spec = PovmSpec.stabilizer(n)
    d = 1 << n
    best = (math.inf, None, None)
    count = 0
    for t in range(trials):
        a = random_pure_state(d, rng)
        b = random_pure_state(d, rng)
        pairs = [(a, b)]
        b_perp = b - np.vdot(a, b) * a
        pairs.append((a, b_perp / np.linalg.norm(b_perp)))
        eps = 10.0 ** -(1 + t % 6)
        c = a + eps * b_perp / np.linalg.norm(b_perp)
        pairs.append((a, c / np.linalg.norm(c)))
        for psi, phi in pairs:
            X = projector(psi) - projector(phi)
            X = (X + X.conj().T) / 2
            tn = trace_norm(X)
            if tn < 1e-12:
                continue
            r = povm_image_l1(spec, X).value / tn
            count += 1
            if r < best[0]:
                best = (r, psi, phi)
    return PurePairSearch(best[0], best[1], best[2], count)
