"""Reference implementation of the hot kernels in numpy / plain Python.

Symplectic vectors are packed into integers: bits ``0..n-1`` carry the X part,
bits ``n..2n-1`` the Z part.  The Hermitian Pauli attached to ``v = (x, z)`` is
``i**popcount(x & z) * X**x Z**z``; qubit ``j`` is bit ``j`` of a computational
basis index.

Every function here has a twin with the same signature and the same random
word consumption in ``_ckernels.pyx``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

_IPOW = np.array([1, 1j, -1, -1j], dtype=complex)


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _symp(a: int, b: int, n: int) -> int:
    mask = (1 << n) - 1
    return _popcount(((a & mask) & (b >> n)) ^ ((a >> n) & (b & mask))) & 1


@lru_cache(maxsize=None)
def _parity_table(d: int) -> np.ndarray:
    c = np.arange(d)
    par = np.zeros(d, dtype=np.int64)
    while np.any(c):
        par ^= c & 1
        c = c >> 1
    return par


def _pauli_gather(v: int, n: int):
    d = 1 << n
    mask = d - 1
    x, z = v & mask, v >> n
    src = np.arange(d) ^ x
    sign = 1 - 2 * _parity_table(d)[src & z]
    return src, _IPOW[_popcount(x & z) % 4] * sign


def pauli_apply_rows(v: int, n: int, vecs: np.ndarray) -> np.ndarray:
    """Apply the Pauli ``v`` to every row of ``vecs`` (shape ``(m, d)``)."""
    src, factor = _pauli_gather(int(v), n)
    return vecs[..., src] * factor


def fwht_rows(a: np.ndarray) -> None:
    """In-place unnormalised Walsh-Hadamard transform along the last axis."""
    rows, d = a.shape
    h = 1
    while h < d:
        view = a.reshape(rows, d // (2 * h), 2, h)
        lo = view[:, :, 0, :].copy()
        hi = view[:, :, 1, :]
        view[:, :, 0, :] += hi
        view[:, :, 1, :] = lo - hi
        h *= 2


def _canonical(rows: list[int], nbits: int) -> int:
    rows = list(rows)
    n = len(rows)
    r = 0
    for bit in range(nbits - 1, -1, -1):
        piv = -1
        for i in range(r, n):
            if (rows[i] >> bit) & 1:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(n):
            if i != r and (rows[i] >> bit) & 1:
                rows[i] ^= rows[r]
        r += 1
        if r == n:
            break
    code = 0
    for i, row in enumerate(rows):
        code |= row << (nbits * i)
    return code


def _gates(n: int) -> list[tuple[int, int, int]]:
    gates = [(0, a, 0) for a in range(n)] + [(1, a, 0) for a in range(n)]
    gates += [(2, a, b) for a in range(n) for b in range(n) if a != b]
    return gates


def _apply_gate(v: int, kind: int, a: int, b: int, n: int) -> int:
    if kind == 0:
        if ((v >> a) ^ (v >> (n + a))) & 1:
            v ^= (1 << a) | (1 << (n + a))
    elif kind == 1:
        if (v >> a) & 1:
            v ^= 1 << (n + a)
    else:
        if (v >> a) & 1:
            v ^= 1 << b
        if (v >> (n + b)) & 1:
            v ^= 1 << (n + a)
    return v


def unpack_rows(code: int, n: int) -> list[int]:
    nbits = 2 * n
    rmask = (1 << nbits) - 1
    return [(int(code) >> (nbits * i)) & rmask for i in range(n)]


def lagrangian_codes(n: int) -> np.ndarray:
    """All maximal isotropic subspaces of F_2^{2n}, as sorted packed RREF codes.

    Breadth-first orbit of the Z-subspace under H, S and CNOT.
    """
    nbits = 2 * n
    start = _canonical([1 << (n + j) for j in range(n)], nbits)
    seen = {start}
    frontier = [start]
    gates = _gates(n)
    while frontier:
        nxt = []
        for code in frontier:
            rows = unpack_rows(code, n)
            for kind, a, b in gates:
                new = _canonical([_apply_gate(r, kind, a, b, n) for r in rows], nbits)
                if new not in seen:
                    seen.add(new)
                    nxt.append(new)
        frontier = nxt
    return np.array(sorted(seen), dtype=np.uint64)


def _swap_halves(v: int, n: int) -> int:
    mask = (1 << n) - 1
    return ((v & mask) << n) | (v >> n)


def _joint_eigenvector(gens: list[int], signs: list[int], n: int) -> np.ndarray:
    # Projector onto the joint (+-1) eigenspace applied to |b>, first b with
    # nonvanishing image.  Stabilizer amplitudes are 0 or >= d**-1/2 in modulus.
    d = 1 << n
    for b in range(d):
        vec = np.zeros((1, d), dtype=complex)
        vec[0, b] = 1.0
        for g, s in zip(gens, signs):
            w = pauli_apply_rows(g, n, vec)
            vec = 0.5 * (vec - w) if s else 0.5 * (vec + w)
        nrm2 = float(np.vdot(vec[0], vec[0]).real)
        if nrm2 > 0.5 / d:
            return vec[0] / np.sqrt(nrm2)
    raise RuntimeError("generators do not define a stabilizer state")


def materialize_bases(codes: np.ndarray, n: int) -> np.ndarray:
    """State vectors for every Lagrangian in ``codes``.

    Returns shape ``(L, d, d)``; entry ``[l, s]`` is the common eigenvector with
    eigenvalue ``(-1)**s_j`` for the j-th RREF row of Lagrangian ``l``.
    """
    d = 1 << n
    out = np.empty((len(codes), d, d), dtype=complex)
    for li, code in enumerate(codes):
        rows = unpack_rows(int(code), n)
        out[li, 0] = _joint_eigenvector(rows, [0] * n, n)
        flips = []
        for row in rows:
            pivot = row.bit_length() - 1
            flips.append(_swap_halves(1 << pivot, n))
        for s in range(1, d):
            j = s.bit_length() - 1
            out[li, s] = pauli_apply_rows(flips[j], n, out[li, s ^ (1 << j)][None, :])[0]
    return out


def _combine(span: list[int], c: int) -> int:
    v = 0
    for i, s in enumerate(span):
        if (c >> i) & 1:
            v ^= s
    return v


def sample_symplectic(words: np.ndarray, n: int):
    """Uniform symplectic basis + sign bits from a buffer of random words.

    Returns ``(images, signs, consumed)``; ``images[j]`` / ``images[n + j]``
    are the images of X_j / Z_j.  Returns ``None`` when the buffer runs dry.
    """
    nn = 2 * n
    cmask = (1 << nn) - 1
    span = [1 << i for i in range(nn)]
    images = [0] * nn
    pos = 0
    nw = len(words)
    for j in range(n):
        while True:
            if pos >= nw:
                return None
            v = _combine(span, int(words[pos]) & cmask)
            pos += 1
            if v:
                break
        while True:
            if pos >= nw:
                return None
            w = _combine(span, int(words[pos]) & cmask)
            pos += 1
            if _symp(v, w, n):
                break
        images[j], images[n + j] = v, w
        for i, s in enumerate(span):
            t = s
            if _symp(s, w, n):
                t ^= v
            if _symp(s, v, n):
                t ^= w
            span[i] = t
    if pos >= nw:
        return None
    signs = int(words[pos]) & cmask
    pos += 1
    return images, signs, pos


def _clifford_columns(images, signs: int, n: int) -> np.ndarray:
    d = 1 << n
    stab = [int(images[n + j]) for j in range(n)]
    psi0 = _joint_eigenvector(stab, [(signs >> (n + j)) & 1 for j in range(n)], n)
    cols = np.empty((d, d), dtype=complex)
    cols[0] = psi0
    for b in range(1, d):
        j = b.bit_length() - 1
        col = pauli_apply_rows(int(images[j]), n, cols[b ^ (1 << j)][None, :])[0]
        cols[b] = -col if (signs >> j) & 1 else col
    return cols


def clifford_unitary(images: np.ndarray, signs: int, n: int) -> np.ndarray:
    """Dense unitary (up to global phase) of the Clifford with the given tableau."""
    return _clifford_columns(images, int(signs), n).T.copy()


def clifford_states(images: np.ndarray, signs: np.ndarray, z: np.ndarray, n: int) -> np.ndarray:
    """Row ``i`` is ``C_i z`` for the Clifford with tableau ``(images[i], signs[i])``."""
    out = np.empty((len(images), 1 << n), dtype=complex)
    for i in range(len(images)):
        out[i] = z @ _clifford_columns(images[i], int(signs[i]), n)
    return out
