"""n-qubit Pauli operators in binary symplectic form.

Conventions
-----------
* Qubit ``j`` is bit ``j`` of a computational-basis index, so dense matrices
  are ``sigma_{n-1} (x) ... (x) sigma_0``.
* The representative of ``(x, z)`` is ``i**popcount(x & z) X**x Z**z``, which is
  Hermitian; in particular ``(x=1, z=1)`` on one qubit is ``Y``.
* Enumeration index ``k`` interleaves bits: the pair ``(k >> 2j) & 3`` holds
  ``x_j`` in its low bit and ``z_j`` in its high bit.  For one qubit the order
  is ``I, X, Z, Y``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels

_LABEL = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_FROM_LABEL = {v: k for k, v in _LABEL.items()}
PHASES = (1, 1j, -1, -1j)


@dataclass(frozen=True)
class PauliOperator:
    """Hermitian n-qubit Pauli given by its X and Z bit strings."""

    n: int
    x_bits: int
    z_bits: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        limit = 1 << self.n
        if not (0 <= self.x_bits < limit and 0 <= self.z_bits < limit):
            raise ValueError(f"bit strings do not fit into {self.n} qubits")

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    @property
    def packed(self) -> int:
        """Symplectic vector as an int: X part in the low ``n`` bits."""
        return self.x_bits | (self.z_bits << self.n)

    @property
    def index(self) -> int:
        return pauli_index(self)

    @property
    def weight(self) -> int:
        return bin(self.x_bits | self.z_bits).count("1")

    @property
    def label(self) -> str:
        """Label with qubit ``n-1`` first, e.g. ``"XZ"`` is ``X`` on qubit 1."""
        return "".join(
            _LABEL[((self.x_bits >> j) & 1, (self.z_bits >> j) & 1)]
            for j in reversed(range(self.n))
        )

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        x = z = 0
        n = len(label)
        for pos, ch in enumerate(label.upper()):
            j = n - 1 - pos
            try:
                xb, zb = _FROM_LABEL[ch]
            except KeyError:
                raise ValueError(f"bad Pauli label {label!r}") from None
            x |= xb << j
            z |= zb << j
        return cls(n, x, z)

    @classmethod
    def from_packed(cls, n: int, v: int) -> "PauliOperator":
        mask = (1 << n) - 1
        return cls(n, int(v) & mask, int(v) >> n)

    def matrix(self) -> np.ndarray:
        return pauli_matrix(self)

    def __matmul__(self, other: "PauliOperator"):
        return pauli_product(self, other)

    def __repr__(self):
        return f"PauliOperator({self.label})"


def pauli_from_index(n: int, k: int) -> PauliOperator:
    """Decode the enumeration index ``k`` in ``[0, 4**n)``; 0 is the identity."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= k < 4**n:
        raise ValueError(f"Pauli index {k} out of range for n={n}")
    x = z = 0
    for j in range(n):
        pair = (k >> (2 * j)) & 3
        x |= (pair & 1) << j
        z |= (pair >> 1) << j
    return PauliOperator(n, x, z)


def pauli_index(p: PauliOperator) -> int:
    k = 0
    for j in range(p.n):
        k |= (((p.x_bits >> j) & 1) | (((p.z_bits >> j) & 1) << 1)) << (2 * j)
    return k


def all_paulis(n: int) -> list[PauliOperator]:
    return [pauli_from_index(n, k) for k in range(4**n)]


@lru_cache(maxsize=8)
def index_to_xz(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays ``(x, z)`` of bit strings, ordered by enumeration index."""
    k = np.arange(4**n)
    x = np.zeros_like(k)
    z = np.zeros_like(k)
    for j in range(n):
        pair = (k >> (2 * j)) & 3
        x |= (pair & 1) << j
        z |= (pair >> 1) << j
    x.setflags(write=False)
    z.setflags(write=False)
    return x, z


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    """Dense ``d x d`` matrix of ``p``."""
    eye = np.eye(p.dim, dtype=complex)
    # columns of W are W|c>, i.e. rows of pauli_apply on the identity
    return _kernels.pauli_apply_rows(p.packed, p.n, eye).T.copy()


def pauli_apply(p: PauliOperator, vecs: np.ndarray) -> np.ndarray:
    """``p`` applied to a vector, or to each row of a 2-D array."""
    vecs = np.asarray(vecs, dtype=complex)
    flat = vecs.reshape(-1, p.dim)
    return _kernels.pauli_apply_rows(p.packed, p.n, flat).reshape(vecs.shape)


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """0 if ``p`` and ``q`` commute, 1 if they anticommute."""
    _check_same_n(p, q)
    return bin((p.x_bits & q.z_bits) ^ (p.z_bits & q.x_bits)).count("1") & 1


def pauli_product(p: PauliOperator, q: PauliOperator) -> tuple[PauliOperator, complex]:
    """Return ``(r, phase)`` with ``W(p) W(q) = phase * W(r)``."""
    _check_same_n(p, q)
    rx, rz = p.x_bits ^ q.x_bits, p.z_bits ^ q.z_bits

    def pc(v):
        return bin(v).count("1")

    # i^{|pxpz|} X^px Z^pz i^{|qxqz|} X^qx Z^qz, move Z^pz past X^qx
    k = pc(p.x_bits & p.z_bits) + pc(q.x_bits & q.z_bits) + 2 * pc(p.z_bits & q.x_bits)
    k -= pc(rx & rz)
    return PauliOperator(p.n, rx, rz), PHASES[k % 4]


def pauli_expand(X: np.ndarray) -> np.ndarray:
    """Coefficients ``tr(W_k X) / d`` in enumeration order."""
    X = np.asarray(X, dtype=complex)
    n = _qubits(X.shape[0])
    return np.array([np.trace(pauli_matrix(p) @ X) for p in all_paulis(n)]) / X.shape[0]


def pauli_reconstruct(coeffs: np.ndarray, n: int) -> np.ndarray:
    d = 1 << n
    out = np.zeros((d, d), dtype=complex)
    for k, c in enumerate(coeffs):
        if c != 0:
            out += c * pauli_matrix(pauli_from_index(n, k))
    return out


def _check_same_n(p, q):
    if p.n != q.n:
        raise ValueError(f"qubit counts differ: {p.n} vs {q.n}")


def _qubits(d: int) -> int:
    n = int(d).bit_length() - 1
    if d < 2 or (1 << n) != d:
        raise ValueError(f"dimension {d} is not a power of two")
    return n
