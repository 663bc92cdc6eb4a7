"""Small dense linear-algebra helpers shared by the other modules.

Hermitian operators and pure states are plain numpy arrays; the checks here
enforce the tolerances used throughout (1e-12 absolute).
"""
from __future__ import annotations

import numpy as np

HERMITIAN_ATOL = 1e-12
NORM_ATOL = 1e-12
RANK_RTOL = 1e-10


def num_qubits(d: int) -> int:
    n = int(d).bit_length() - 1
    if d < 2 or (1 << n) != d:
        raise ValueError(f"dimension {d} is not a power of two")
    return n


def as_hermitian(X, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return ``X`` as a complex square array, raising if it is not Hermitian."""
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("matrix has non-finite entries")
    dev = np.max(np.abs(X - X.conj().T)) if X.size else 0.0
    if dev > atol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3g})")
    return X


def as_pure_state(z, atol: float = NORM_ATOL) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.ndim != 1:
        raise ValueError(f"expected a vector, got shape {z.shape}")
    nrm = np.linalg.norm(z)
    if not np.isfinite(nrm) or abs(nrm - 1.0) > atol:
        raise ValueError(f"state vector is not normalised (norm {nrm!r})")
    return z


def as_state(rho, atol: float = 1e-10) -> np.ndarray:
    """Density matrix check: Hermitian, unit trace, positive semidefinite."""
    rho = as_hermitian(rho)
    if abs(np.trace(rho).real - 1.0) > atol:
        raise ValueError("density matrix does not have unit trace")
    if np.linalg.eigvalsh(rho)[0] < -atol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def projector(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.outer(z, z.conj())


def eigenvalues(X) -> np.ndarray:
    return np.linalg.eigvalsh(as_hermitian(X))


def schatten_norm(X, p: float = 1) -> np.ndarray:
    """Schatten p-norm of a Hermitian matrix; ``p = np.inf`` gives the spectral norm."""
    s = np.abs(eigenvalues(X))
    if p == np.inf:
        return float(s.max(initial=0.0))
    return float(np.sum(s**p) ** (1.0 / p))


def trace_norm(X) -> float:
    return schatten_norm(X, 1)


def lp_norm(v, p: float) -> float:
    """Entrywise ℓ_p norm."""
    a = np.abs(np.asarray(v))
    if p == np.inf:
        return float(a.max(initial=0.0))
    return float(np.sum(a**p) ** (1.0 / p))


def numerical_rank(X, rtol: float = RANK_RTOL) -> int:
    s = np.abs(eigenvalues(X))
    if s.size == 0 or s.max() == 0:
        return 0
    return int(np.sum(s > rtol * s.max()))


def effective_rank(X) -> float:
    """``‖X‖₁² / ‖X‖₂²``; lies between 1 and ``rank(X)``."""
    s = np.abs(eigenvalues(X))
    two = float(np.sum(s**2))
    if two == 0.0:
        raise ValueError("effective rank of the zero matrix is undefined")
    return float(np.sum(s)) ** 2 / two


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    """GUE-like random Hermitian matrix."""
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unit vector via a normalised complex Gaussian."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
