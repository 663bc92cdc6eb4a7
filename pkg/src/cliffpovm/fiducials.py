"""Fiducial states, characteristic functions and the localisation measure alpha.

The characteristic function of a Hermitian ``X`` is the real vector
``Xi[k] = tr(W_k X)`` indexed as in :mod:`cliffpovm.pauli`.  It is computed
with one Walsh-Hadamard transform per X-shift, ``O(d^2 log d)`` in total.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from . import _kernels
from .linalg import (
    as_hermitian,
    as_pure_state,
    effective_rank,  # noqa: F401  re-exported
    lp_norm,  # noqa: F401
    num_qubits,
    random_pure_state,
    schatten_norm,  # noqa: F401
)
from .pauli import index_to_xz

MAGIC_THETA = float(np.arccos(1 / np.sqrt(3)))
MAGIC_PHASE = np.exp(1j * np.pi / 4)


def _phase_table(n: int):
    # (x, z) -> k with i^{|x & z|}
    d = 1 << n
    xs, zs = index_to_xz(n)
    pos = np.empty((d, d), dtype=np.int64)
    pos[xs, zs] = np.arange(d * d)
    pc = np.zeros((d, d), dtype=np.int64)
    and_ = np.arange(d)[:, None] & np.arange(d)[None, :]
    while np.any(and_):
        pc += and_ & 1
        and_ >>= 1
    ph = np.array([1, 1j, -1, -1j])[pc % 4]
    return pos, ph


def _shift_rows(M: np.ndarray) -> np.ndarray:
    """``a[..., x, y] = M[..., y, y ^ x]``."""
    d = M.shape[-1]
    y = np.arange(d)
    cols = y[None, :] ^ y[:, None]  # [x, y] -> y ^ x
    return M[..., y[None, :], cols]


def _xi_from_shifted(a: np.ndarray, n: int) -> np.ndarray:
    d = 1 << n
    lead = a.shape[:-2]
    flat = np.ascontiguousarray(a.reshape(-1, d), dtype=complex)
    _kernels.fwht_rows(flat)
    pos, ph = _phase_table(n)
    vals = flat.reshape(lead + (d, d)) * ph
    out = np.empty(lead + (d * d,), dtype=complex)
    out[..., pos.ravel()] = vals.reshape(lead + (d * d,))
    return out


def characteristic_function(X) -> np.ndarray:
    """Real vector ``tr(W_k X)`` of length ``d**2``."""
    X = as_hermitian(X)
    n = num_qubits(X.shape[0])
    xi = _xi_from_shifted(_shift_rows(X), n)
    return xi.real.copy()


def characteristic_function_states(states) -> np.ndarray:
    """Characteristic vectors of ``|z><z|`` for each row ``z`` of ``states``."""
    Z = np.atleast_2d(np.asarray(states, dtype=complex))
    n = num_qubits(Z.shape[1])
    d = Z.shape[1]
    y = np.arange(d)
    a = Z[:, None, :] * Z[:, y[:, None] ^ y[None, :]].conj()
    return _xi_from_shifted(a, n).real


def alpha(z) -> float:
    """``(1/d^2) * ||Xi(|z><z|)||_4^4``; between ``2/(d(d+1))`` and ``1/d``."""
    z = as_pure_state(z)
    d = z.shape[0]
    xi = characteristic_function_states(z[None, :])[0]
    return float(np.sum(xi**4) / d**2)


def alpha_range(d: int) -> tuple[float, float]:
    return 2.0 / (d * (d + 1)), 1.0 / d


def check_alpha(alpha_val: float, d: int, tol: float = 1e-9) -> float:
    lo, hi = alpha_range(d)
    if not (lo - tol <= alpha_val <= hi + tol):
        raise ValueError(f"alpha={alpha_val!r} outside [{lo}, {hi}] for d={d}")
    return float(alpha_val)


def beta(alpha_val: float, d: int) -> float:
    """``4 (1 - alpha) / ((d + 4)(d - 1))``."""
    check_alpha(alpha_val, d)
    return 4.0 * (1.0 - alpha_val) / ((d + 4) * (d - 1))


def design4_alpha(d: int) -> float:
    """Localisation at which ``alpha == beta``."""
    return 4.0 / (d * (d + 3))


def typical_alpha_threshold(d: int) -> float:
    return 6.0 / ((d + 3) * d)


class FiducialTag(str, Enum):
    STABILIZER = "stabilizer_basis_state"
    MAGIC = "magic_product"
    HAAR = "haar_random"
    EXPLICIT = "explicit_vector"


_ALIASES = {
    "stabilizer": FiducialTag.STABILIZER,
    "stab": FiducialTag.STABILIZER,
    "magic": FiducialTag.MAGIC,
    "haar": FiducialTag.HAAR,
    "random": FiducialTag.HAAR,
    "explicit": FiducialTag.EXPLICIT,
}


@dataclass(frozen=True)
class FiducialKind:
    tag: FiducialTag
    seed: int | None = None
    vector: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tag", parse_tag(self.tag))
        if self.tag is FiducialTag.HAAR and self.seed is None:
            raise ValueError("haar_random fiducial needs a seed")
        if self.tag is FiducialTag.EXPLICIT:
            if self.vector is None:
                raise ValueError("explicit_vector fiducial needs amplitudes")
            v = as_pure_state(np.asarray(self.vector, dtype=complex))
            object.__setattr__(self, "vector", tuple(complex(c) for c in v))

    @classmethod
    def stabilizer(cls):
        return cls(FiducialTag.STABILIZER)

    @classmethod
    def magic(cls):
        return cls(FiducialTag.MAGIC)

    @classmethod
    def haar(cls, seed: int):
        return cls(FiducialTag.HAAR, seed=seed)

    @classmethod
    def explicit(cls, vector):
        return cls(FiducialTag.EXPLICIT, vector=tuple(np.asarray(vector, dtype=complex)))


def parse_tag(tag) -> FiducialTag:
    if isinstance(tag, FiducialTag):
        return tag
    key = str(tag).strip().lower()
    if key in _ALIASES:
        return _ALIASES[key]
    try:
        return FiducialTag(key)
    except ValueError:
        raise ValueError(f"unknown fiducial kind {tag!r}") from None


def magic_qubit() -> np.ndarray:
    """Single-qubit state with Bloch vector ``(1, 1, 1)/sqrt(3)``."""
    return np.array([np.cos(MAGIC_THETA / 2), MAGIC_PHASE * np.sin(MAGIC_THETA / 2)])


def make_fiducial(kind: FiducialKind, n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be positive")
    d = 1 << n
    if kind.tag is FiducialTag.STABILIZER:
        z = np.zeros(d, dtype=complex)
        z[0] = 1
        return z
    if kind.tag is FiducialTag.MAGIC:
        m = magic_qubit()
        z = np.ones(1, dtype=complex)
        for _ in range(n):
            z = np.kron(z, m)
        return z / np.linalg.norm(z)
    if kind.tag is FiducialTag.HAAR:
        return random_pure_state(d, np.random.default_rng(kind.seed))
    z = np.asarray(kind.vector, dtype=complex)
    if z.shape != (d,):
        raise ValueError(f"explicit fiducial has length {z.shape[0]}, expected {d}")
    return z


def load_fiducial_json(path) -> np.ndarray:
    """Read a JSON array of ``[re, im]`` pairs and check it is a unit vector."""
    data = json.loads(Path(path).read_text())
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise ValueError("fiducial file must hold an array of [re, im] pairs") from None
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("fiducial file must hold an array of [re, im] pairs")
    z = arr[:, 0] + 1j * arr[:, 1]
    num_qubits(z.shape[0])
    return as_pure_state(z, atol=1e-9) / np.linalg.norm(z)


def save_fiducial_json(path, z) -> None:
    z = np.asarray(z, dtype=complex)
    Path(path).write_text(json.dumps([[float(c.real), float(c.imag)] for c in z]))
