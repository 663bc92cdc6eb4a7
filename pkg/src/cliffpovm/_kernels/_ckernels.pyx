# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_pykernels``.

Same packing conventions, same outputs, same consumption of random words.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_clzll(unsigned long long) nogil


cdef inline int _pc(uint64_t v) noexcept nogil:
    return __builtin_popcountll(v)


cdef inline int _top(uint64_t v) noexcept nogil:
    # index of the highest set bit, v > 0
    return 63 - __builtin_clzll(v)


cdef inline int _symp(uint64_t a, uint64_t b, int n) noexcept nogil:
    cdef uint64_t mask = (<uint64_t>1 << n) - 1
    return _pc(((a & mask) & (b >> n)) ^ ((a >> n) & (b & mask))) & 1


cdef inline double complex _ipow(int k) noexcept nogil:
    k = k & 3
    if k == 0:
        return 1.0
    elif k == 1:
        return 1j
    elif k == 2:
        return -1.0
    return -1j


cdef void _pauli(uint64_t v, int n, const double complex* u, double complex* out) noexcept nogil:
    cdef uint64_t mask = (<uint64_t>1 << n) - 1
    cdef uint64_t x = v & mask
    cdef uint64_t z = v >> n
    cdef int d = 1 << n
    cdef double complex ph = _ipow(_pc(x & z))
    cdef uint64_t c, src
    for c in range(<uint64_t>d):
        src = c ^ x
        if _pc(z & src) & 1:
            out[c] = -ph * u[src]
        else:
            out[c] = ph * u[src]


def pauli_apply_rows(uint64_t v, int n, vecs):
    cdef const double complex[:, ::1] a = np.ascontiguousarray(vecs, dtype=complex).reshape(-1, 1 << n)
    out = np.empty((a.shape[0], 1 << n), dtype=complex)
    cdef double complex[:, ::1] o = out
    cdef Py_ssize_t r
    with nogil:
        for r in range(a.shape[0]):
            _pauli(v, n, &a[r, 0], &o[r, 0])
    return out.reshape(np.shape(vecs))


def fwht_rows(double complex[:, ::1] a):
    cdef Py_ssize_t rows = a.shape[0], d = a.shape[1]
    cdef Py_ssize_t r, h, i, j
    cdef double complex x, y
    with nogil:
        for r in range(rows):
            h = 1
            while h < d:
                i = 0
                while i < d:
                    for j in range(i, i + h):
                        x = a[r, j]
                        y = a[r, j + h]
                        a[r, j] = x + y
                        a[r, j + h] = x - y
                    i += 2 * h
                h *= 2


cdef uint64_t _canonical(uint64_t* rows, int n, int nbits) noexcept nogil:
    cdef int r = 0, bit, i, piv
    cdef uint64_t tmp, code = 0
    bit = nbits - 1
    while bit >= 0 and r < n:
        piv = -1
        for i in range(r, n):
            if (rows[i] >> bit) & 1:
                piv = i
                break
        if piv >= 0:
            tmp = rows[r]
            rows[r] = rows[piv]
            rows[piv] = tmp
            for i in range(n):
                if i != r and (rows[i] >> bit) & 1:
                    rows[i] ^= rows[r]
            r += 1
        bit -= 1
    for i in range(n):
        code |= rows[i] << (nbits * i)
    return code


cdef inline uint64_t _gate(uint64_t v, int kind, int a, int b, int n) noexcept nogil:
    if kind == 0:
        if ((v >> a) ^ (v >> (n + a))) & 1:
            v ^= (<uint64_t>1 << a) | (<uint64_t>1 << (n + a))
    elif kind == 1:
        if (v >> a) & 1:
            v ^= <uint64_t>1 << (n + a)
    else:
        if (v >> a) & 1:
            v ^= <uint64_t>1 << b
        if (v >> (n + b)) & 1:
            v ^= <uint64_t>1 << (n + a)
    return v


def lagrangian_codes(int n):
    cdef int nbits = 2 * n
    cdef uint64_t rmask = (<uint64_t>1 << nbits) - 1
    cdef uint64_t rows[8]
    cdef uint64_t cur[8]
    cdef vector[int] kinds, ga, gb
    cdef int a, b, g, i, j
    for a in range(n):
        kinds.push_back(0); ga.push_back(a); gb.push_back(0)
    for a in range(n):
        kinds.push_back(1); ga.push_back(a); gb.push_back(0)
    for a in range(n):
        for b in range(n):
            if a != b:
                kinds.push_back(2); ga.push_back(a); gb.push_back(b)
    cdef unordered_set[uint64_t] seen
    cdef vector[uint64_t] queue
    cdef uint64_t code, new
    cdef size_t head = 0
    for j in range(n):
        rows[j] = <uint64_t>1 << (n + j)
    code = _canonical(rows, n, nbits)
    seen.insert(code)
    queue.push_back(code)
    with nogil:
        while head < queue.size():
            code = queue[head]
            head += 1
            for i in range(n):
                cur[i] = (code >> (nbits * i)) & rmask
            for g in range(<int>kinds.size()):
                for i in range(n):
                    rows[i] = _gate(cur[i], kinds[g], ga[g], gb[g], n)
                new = _canonical(rows, n, nbits)
                if seen.count(new) == 0:
                    seen.insert(new)
                    queue.push_back(new)
    out = np.empty(queue.size(), dtype=np.uint64)
    cdef uint64_t[::1] o = out
    for head in range(queue.size()):
        o[head] = queue[head]
    out.sort()
    return out


cdef int _joint_eigenvector(const uint64_t* gens, const int* signs, int n,
                            double complex* vec, double complex* tmp) noexcept nogil:
    cdef int d = 1 << n
    cdef int b, j, c
    cdef double nrm2, scale
    for b in range(d):
        for c in range(d):
            vec[c] = 0
        vec[b] = 1
        for j in range(n):
            _pauli(gens[j], n, vec, tmp)
            if signs[j]:
                for c in range(d):
                    vec[c] = 0.5 * (vec[c] - tmp[c])
            else:
                for c in range(d):
                    vec[c] = 0.5 * (vec[c] + tmp[c])
        nrm2 = 0
        for c in range(d):
            nrm2 += vec[c].real * vec[c].real + vec[c].imag * vec[c].imag
        if nrm2 > 0.5 / d:
            scale = 1.0 / sqrt(nrm2)
            for c in range(d):
                vec[c] = vec[c] * scale
            return 0
    return -1


def materialize_bases(const uint64_t[::1] codes, int n):
    cdef int d = 1 << n
    cdef int nbits = 2 * n
    cdef uint64_t rmask = (<uint64_t>1 << nbits) - 1
    cdef uint64_t mask = (<uint64_t>1 << n) - 1
    cdef Py_ssize_t L = codes.shape[0], li
    out = np.empty((L, d, d), dtype=complex)
    cdef double complex[:, :, ::1] o = out
    cdef uint64_t rows[8]
    cdef uint64_t flips[8]
    cdef int zeros[8]
    cdef int i, s, j, failed = 0
    cdef uint64_t p
    cdef double complex* tmp = <double complex*> malloc(d * sizeof(double complex))
    for i in range(8):
        zeros[i] = 0
    with nogil:
        for li in range(L):
            for i in range(n):
                rows[i] = (codes[li] >> (nbits * i)) & rmask
                p = <uint64_t>1 << _top(rows[i])
                flips[i] = ((p & mask) << n) | (p >> n)
            if _joint_eigenvector(rows, zeros, n, &o[li, 0, 0], tmp) != 0:
                failed = 1
                break
            for s in range(1, d):
                j = _top(<uint64_t>s)
                _pauli(flips[j], n, &o[li, s ^ (1 << j), 0], &o[li, s, 0])
    free(tmp)
    if failed:
        raise RuntimeError("generators do not define a stabilizer state")
    return out


def sample_symplectic(const cnp.uint64_t[::1] words, int n):
    cdef int nn = 2 * n
    cdef uint64_t cmask = (<uint64_t>1 << nn) - 1
    cdef uint64_t span[16]
    cdef uint64_t images[16]
    cdef Py_ssize_t pos = 0, nw = words.shape[0]
    cdef int i, j
    cdef uint64_t v, w, c, t, s
    for i in range(nn):
        span[i] = <uint64_t>1 << i
    for j in range(n):
        while True:
            if pos >= nw:
                return None
            c = words[pos] & cmask
            pos += 1
            v = 0
            for i in range(nn):
                if (c >> i) & 1:
                    v ^= span[i]
            if v:
                break
        while True:
            if pos >= nw:
                return None
            c = words[pos] & cmask
            pos += 1
            w = 0
            for i in range(nn):
                if (c >> i) & 1:
                    w ^= span[i]
            if _symp(v, w, n):
                break
        images[j] = v
        images[n + j] = w
        for i in range(nn):
            s = span[i]
            t = s
            if _symp(s, w, n):
                t ^= v
            if _symp(s, v, n):
                t ^= w
            span[i] = t
    if pos >= nw:
        return None
    s = words[pos] & cmask
    pos += 1
    return [int(images[i]) for i in range(nn)], int(s), int(pos)


cdef int _columns(const uint64_t* images, uint64_t signs, int n,
                  double complex* cols, double complex* tmp) noexcept nogil:
    # cols is d x d, row b holds C|b>
    cdef int d = 1 << n
    cdef uint64_t stab[8]
    cdef int sg[8]
    cdef int j, b, c
    for j in range(n):
        stab[j] = images[n + j]
        sg[j] = (signs >> (n + j)) & 1
    if _joint_eigenvector(stab, sg, n, cols, tmp) != 0:
        return -1
    for b in range(1, d):
        j = _top(<uint64_t>b)
        _pauli(images[j], n, &cols[(b ^ (1 << j)) * d], &cols[b * d])
        if (signs >> j) & 1:
            for c in range(d):
                cols[b * d + c] = -cols[b * d + c]
    return 0


def clifford_unitary(images, signs, int n):
    cdef int d = 1 << n
    cdef const uint64_t[::1] im = np.ascontiguousarray(images, dtype=np.uint64)
    cols = np.empty((d, d), dtype=complex)
    cdef double complex[:, ::1] cv = cols
    cdef double complex* tmp = <double complex*> malloc(d * sizeof(double complex))
    cdef int rc = _columns(&im[0], <uint64_t>int(signs), n, &cv[0, 0], tmp)
    free(tmp)
    if rc != 0:
        raise RuntimeError("tableau does not define a Clifford unitary")
    return cols.T.copy()


def clifford_states(images, signs, z, int n):
    cdef int d = 1 << n
    cdef const uint64_t[:, ::1] im = np.ascontiguousarray(images, dtype=np.uint64)
    cdef const uint64_t[::1] sg = np.ascontiguousarray(signs, dtype=np.uint64)
    cdef const double complex[::1] zv = np.ascontiguousarray(z, dtype=complex)
    cdef Py_ssize_t S = im.shape[0], i
    out = np.zeros((S, d), dtype=complex)
    cdef double complex[:, ::1] o = out
    cdef double complex* cols = <double complex*> malloc(d * d * sizeof(double complex))
    cdef double complex* tmp = <double complex*> malloc(d * sizeof(double complex))
    cdef int b, c, failed = 0
    with nogil:
        for i in range(S):
            if _columns(&im[i, 0], sg[i], n, cols, tmp) != 0:
                failed = 1
                break
            for b in range(d):
                for c in range(d):
                    o[i, c] = o[i, c] + zv[b] * cols[b * d + c]
    free(cols)
    free(tmp)
    if failed:
        raise RuntimeError("tableau does not define a Clifford unitary")
    return out
