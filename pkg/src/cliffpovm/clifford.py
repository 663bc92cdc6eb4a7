"""Stabilizer-state enumeration and uniform sampling from the Clifford group.

Stabilizer states are produced basis by basis: every maximal isotropic
subspace of F_2^{2n} (an unsigned stabilizer group) contributes ``d``
orthonormal states, one per sign pattern.  State ``s`` of a basis has
eigenvalue ``(-1)**s_j`` on the ``j``-th generator of the canonical form.

Random Cliffords are drawn as a uniformly random symplectic basis plus ``2n``
uniform sign bits.  For Monte-Carlo work every sample index owns its own
Philox stream derived from ``(seed, index)``, so results do not depend on how
samples are split across threads.
"""
from __future__ import annotations

import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, prod
from pathlib import Path

import numpy as np

from . import _kernels
from .fiducials import characteristic_function
from .linalg import as_pure_state
from .pauli import PauliOperator, pauli_from_index, pauli_matrix

MAX_QUBITS = 5
CACHE_MAGIC = b"CLFD"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sIIQ")

MC_CHUNK = 4096


def stabilizer_count(n: int) -> int:
    """Number of n-qubit stabilizer states, ``2**n * prod(2**j + 1)``."""
    return 2**n * prod(2**j + 1 for j in range(1, n + 1))


def stabilizer_basis_count(n: int) -> int:
    return prod(2**j + 1 for j in range(1, n + 1))


@dataclass(frozen=True, eq=False)
class StabilizerOrbit:
    """All stabilizer states of ``n`` qubits, grouped into orthonormal bases.

    ``states`` has shape ``(N, d)``; basis ``b`` owns rows ``b*d .. b*d + d - 1``.
    """

    n: int
    states: np.ndarray
    codes: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return 1 << self.n

    @property
    def N(self) -> int:
        return self.states.shape[0]

    @property
    def num_bases(self) -> int:
        return self.N // self.d

    @property
    def basis_index(self) -> np.ndarray:
        return np.arange(self.N) // self.d

    def bases(self) -> np.ndarray:
        """View of shape ``(N/d, d, d)``; ``bases()[b, s]`` is a state vector."""
        return self.states.reshape(self.num_bases, self.d, self.d)

    def generators(self, b: int) -> list[PauliOperator]:
        """Unsigned generators of the stabilizer group shared by basis ``b``."""
        rows = _kernels._pykernels.unpack_rows(int(self.codes[b]), self.n)
        return [PauliOperator.from_packed(self.n, r) for r in rows]


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"stabilizer enumeration supports 1 <= n <= {MAX_QUBITS}, got {n}")


@lru_cache(maxsize=None)
def lagrangian_codes(n: int) -> np.ndarray:
    _check_n(n)
    codes = _kernels.lagrangian_codes(n)
    codes.setflags(write=False)
    return codes


def span(code: int, n: int) -> np.ndarray:
    """All ``d`` packed symplectic vectors in the span of a canonical code."""
    rows = _kernels._pykernels.unpack_rows(int(code), n)
    out = np.zeros(1 << n, dtype=np.int64)
    for m in range(1, 1 << n):
        j = m.bit_length() - 1
        out[m] = out[m ^ (1 << j)] ^ rows[j]
    return out


def _cache_path(cache_dir, n: int) -> Path:
    return Path(cache_dir) / f"stabilizer_n{n}.clfd"


def write_orbit_cache(path, n: int, states: np.ndarray) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, n, states.shape[0]))
        fh.write(np.ascontiguousarray(states, dtype="<c16").tobytes())
    os.replace(tmp, path)


def read_orbit_cache(path, n: int) -> np.ndarray:
    """Load cached state vectors, validating the header against ``n``."""
    d = 1 << n
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, version, n_file, N = _HEADER.unpack(head)
        if magic != CACHE_MAGIC:
            raise ValueError(f"{path}: not an orbit cache file")
        if version != CACHE_VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        if n_file != n or N != stabilizer_count(n):
            raise ValueError(f"{path}: cache is for n={n_file}, N={N}")
        data = np.fromfile(fh, dtype="<c16", count=N * d)
    if data.size != N * d:
        raise ValueError(f"{path}: truncated payload")
    return data.reshape(N, d).astype(complex, copy=False)


_ORBITS: dict[int, StabilizerOrbit] = {}


def enumerate_stabilizer_states(n: int, cache_dir=None) -> StabilizerOrbit:
    """Every n-qubit stabilizer state, ``1 <= n <= 5``.

    Results are memoised per process.  With ``cache_dir`` the vectors are also
    read from / written to a binary file there.
    """
    _check_n(n)
    if n in _ORBITS:
        return _ORBITS[n]
    codes = lagrangian_codes(n)
    states = None
    if cache_dir is not None:
        path = _cache_path(cache_dir, n)
        if path.exists():
            states = read_orbit_cache(path, n)
    if states is None:
        d = 1 << n
        states = _kernels.materialize_bases(np.ascontiguousarray(codes), n).reshape(-1, d)
        if cache_dir is not None:
            write_orbit_cache(_cache_path(cache_dir, n), n, states)
    states.setflags(write=False)
    orbit = StabilizerOrbit(n, states, codes)
    _ORBITS[n] = orbit
    return orbit


# -- Clifford group ---------------------------------------------------------


@dataclass(eq=False)
class CliffordElement:
    """Clifford unitary modulo phase, stored as a signed symplectic tableau.

    ``C X_j C^dag = (-1)**s_j W(images[j])`` and
    ``C Z_j C^dag = (-1)**t_j W(images[n + j])`` where ``s_j`` is sign bit ``j``
    and ``t_j`` is sign bit ``n + j``.
    """

    n: int
    images: np.ndarray
    signs: int
    _unitary: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.uint64)
        self.signs = int(self.signs)
        if self.images.shape != (2 * self.n,):
            raise ValueError("tableau needs 2n packed images")

    @property
    def d(self) -> int:
        return 1 << self.n

    @property
    def tableau(self) -> np.ndarray:
        """Binary ``2n x 2n`` matrix; row ``i`` is the image of generator ``i``."""
        bits = np.arange(2 * self.n, dtype=np.uint64)
        return ((self.images[:, None] >> bits[None, :]) & np.uint64(1)).astype(np.uint8)

    @property
    def sign_bits(self) -> np.ndarray:
        return np.array([(self.signs >> i) & 1 for i in range(2 * self.n)], dtype=np.uint8)

    @property
    def unitary(self) -> np.ndarray:
        if self._unitary is None:
            self._unitary = _kernels.clifford_unitary(self.images, self.signs, self.n)
        return self._unitary

    @classmethod
    def identity(cls, n: int) -> "CliffordElement":
        return cls(n, np.array([1 << i for i in range(2 * n)], dtype=np.uint64), 0)

    @classmethod
    def from_unitary(cls, U: np.ndarray) -> "CliffordElement":
        """Recover the tableau of a Clifford unitary by conjugating generators."""
        U = np.asarray(U, dtype=complex)
        d = U.shape[0]
        n = d.bit_length() - 1
        images = np.zeros(2 * n, dtype=np.uint64)
        signs = 0
        for i in range(2 * n):
            g = PauliOperator.from_packed(n, 1 << i)
            q, ph = conjugate_pauli_matrix(U, g)
            images[i] = q.packed
            signs |= int(ph < 0) << i
        el = cls(n, images, signs)
        el._unitary = U
        return el

    def conjugate(self, p: PauliOperator) -> tuple[PauliOperator, int]:
        """``C p C^dag = sign * W(q)``; returns ``(q, sign)``."""
        if p.n != self.n:
            raise ValueError("qubit count mismatch")
        return conjugate_pauli_matrix(self.unitary, p)


def conjugate_pauli_matrix(U: np.ndarray, p: PauliOperator) -> tuple[PauliOperator, int]:
    """Identify ``U W(p) U^dag`` as ``sign * W(q)`` from its dense matrix."""
    n = p.n
    d = 1 << n
    M = U @ pauli_matrix(p) @ U.conj().T
    xi = characteristic_function((M + M.conj().T) / 2)
    k = int(np.argmax(np.abs(xi)))
    val = xi[k] / d
    if abs(abs(val) - 1) > 1e-8:
        raise ValueError("matrix is not a Clifford unitary")
    return pauli_from_index(n, k), int(np.sign(val))


def clifford_apply(C: CliffordElement, psi) -> np.ndarray:
    psi = as_pure_state(psi)
    if psi.shape[0] != C.d:
        raise ValueError(f"state has dimension {psi.shape[0]}, Clifford acts on {C.d}")
    return C.unitary @ psi


def _words_needed(n: int) -> int:
    return 16 * n + 16


def _sample_from_words(words_fn, n: int) -> tuple[list[int], int]:
    k = _words_needed(n)
    while True:
        res = _kernels.sample_symplectic(words_fn(k), n)
        if res is not None:
            return res[0], res[1]
        k *= 2


def sample_clifford(n: int, rng: np.random.Generator) -> CliffordElement:
    """Uniformly random ``n``-qubit Clifford (modulo phase) from ``rng``."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"Clifford sampling supports 1 <= n <= {MAX_QUBITS}")
    buf = np.empty(0, dtype=np.uint64)

    def words(k):
        nonlocal buf
        if buf.size < k:
            extra = rng.integers(0, 2**64, size=k - buf.size, dtype=np.uint64, endpoint=False)
            buf = np.concatenate([buf, extra])
        return buf[:k]

    images, signs = _sample_from_words(words, n)
    return CliffordElement(n, np.array(images, dtype=np.uint64), signs)


def _stream(seed: int, index: int) -> np.random.Philox:
    return np.random.Philox(key=int(seed) & ((1 << 128) - 1), counter=int(index) << 192)


def clifford_for_index(n: int, seed: int, index: int) -> CliffordElement:
    """The Clifford drawn for sample ``index`` of a seeded Monte-Carlo run."""
    images, signs = _sample_from_words(lambda k: _stream(seed, index).random_raw(k), n)
    return CliffordElement(n, np.array(images, dtype=np.uint64), signs)


def sample_tableaus(n: int, seed: int, start: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Tableaus for sample indices ``start .. start + count - 1``."""
    images = np.empty((count, 2 * n), dtype=np.uint64)
    signs = np.empty(count, dtype=np.uint64)
    for i in range(count):
        im, sg = _sample_from_words(lambda k: _stream(seed, start + i).random_raw(k), n)
        images[i] = im
        signs[i] = sg
    return images, signs


def default_threads() -> int:
    return os.cpu_count() or 1


def orbit_chunks(z, n: int, samples: int, seed: int, fn, threads: int | None = None,
                 chunk: int = MC_CHUNK) -> list:
    """Apply ``fn`` to consecutive blocks of sampled orbit states ``C_i z``.

    Blocks have a fixed size independent of ``threads`` and results come back
    in block order, so any reduction over them is thread-count invariant.
    """
    z = as_pure_state(z)
    if z.shape[0] != 1 << n:
        raise ValueError("fiducial dimension does not match n")
    starts = list(range(0, samples, chunk))

    def work(s):
        cnt = min(chunk, samples - s)
        im, sg = sample_tableaus(n, seed, s, cnt)
        return fn(_kernels.clifford_states(im, sg, z, n))

    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or len(starts) == 1:
        return [work(s) for s in starts]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(work, starts))


def sample_orbit_states(z, n: int, samples: int, seed: int, threads: int | None = None) -> np.ndarray:
    """Rows ``C_i z`` for Cliffords drawn from the per-index streams."""
    parts = orbit_chunks(z, n, samples, seed, lambda s: s, threads)
    return np.concatenate(parts, axis=0)


def frame_potential(states, t: int, block: int = 2048) -> float:
    """``(1/N^2) sum_{j,k} |<x_j|x_k>|^(2t)`` over the rows of ``states``."""
    S = np.asarray(states, dtype=complex)
    N = S.shape[0]
    total = 0.0
    for a in range(0, N, block):
        G = np.abs(S[a:a + block].conj() @ S.T) ** 2
        total += float(np.sum(G**t))
    return total / N**2


def design_frame_potential(d: int, t: int) -> float:
    """Frame potential of a complex projective ``t``-design in dimension ``d``."""
    return 1.0 / comb(d + t - 1, t)
