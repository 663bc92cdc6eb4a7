import numpy as np
import pytest
from scipy.stats import chisquare

from cliffpovm import clifford as cl
from cliffpovm.fiducials import FiducialKind, make_fiducial
from cliffpovm.linalg import random_pure_state
from cliffpovm.pauli import PauliOperator, all_paulis

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j])


def _key(U):
    # canonical representative of U modulo global phase
    k = np.flatnonzero(np.abs(U.ravel()) > 1e-9)[0]
    V = U / (U.ravel()[k] / abs(U.ravel()[k]))
    return tuple(np.round(V.ravel(), 8))


def single_qubit_group():
    group = {_key(np.eye(2)): np.eye(2, dtype=complex)}
    frontier = list(group.values())
    while frontier:
        nxt = []
        for U in frontier:
            for g in (H, S):
                V = g @ U
                k = _key(V)
                if k not in group:
                    group[k] = V
                    nxt.append(V)
        frontier = nxt
    return group


def test_single_qubit_group_order():
    assert len(single_qubit_group()) == 24


def test_sampler_uniform_on_single_qubit(rng):
    group = single_qubit_group()
    index = {k: i for i, k in enumerate(group)}
    counts = np.zeros(24)
    for _ in range(24000):
        counts[index[_key(cl.sample_clifford(1, rng).unitary)]] += 1
    assert chisquare(counts).pvalue > 1e-4


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tableau_matches_unitary(n, rng):
    for _ in range(10):
        C = cl.sample_clifford(n, rng)
        U = C.unitary
        assert np.allclose(U.conj().T @ U, np.eye(2**n))
        for i in range(2 * n):
            q, sign = C.conjugate(PauliOperator.from_packed(n, 1 << i))
            assert q.packed == int(C.images[i])
            assert sign == (-1 if C.sign_bits[i] else 1)
        R = cl.CliffordElement.from_unitary(U)
        assert np.array_equal(R.images, C.images) and R.signs == C.signs


def test_conjugation_preserves_products(rng):
    C = cl.sample_clifford(2, rng)
    U = C.unitary
    for p in all_paulis(2):
        q, s = C.conjugate(p)
        assert np.allclose(U @ p.matrix() @ U.conj().T, s * q.matrix())


def test_z1_orbit_is_transitive():
    seen = set()
    for i in range(3000):
        C = cl.clifford_for_index(2, 11, i)
        q, s = C.conjugate(PauliOperator.from_label("ZI"))
        seen.add((q.packed, s))
    assert len(seen) == 30


def test_identity_element():
    C = cl.CliffordElement.identity(2)
    assert np.allclose(C.unitary, np.eye(4))
    assert np.array_equal(C.tableau, np.eye(4, dtype=np.uint8))


def test_apply_checks_dimension():
    with pytest.raises(ValueError):
        cl.clifford_apply(cl.CliffordElement.identity(2), np.array([1.0, 0.0]))


@pytest.mark.parametrize("n,count", [(1, 6), (2, 60), (3, 1080), (4, 36720)])
def test_orbit_counts(n, count):
    orb = cl.enumerate_stabilizer_states(n)
    assert orb.N == count == cl.stabilizer_count(n)
    assert orb.num_bases == cl.stabilizer_basis_count(n) == len(cl.lagrangian_codes(n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_orbit_states_are_stabilizer_states(n):
    orb = cl.enumerate_stabilizer_states(n)
    d = orb.d
    for b in range(orb.num_bases):
        B = orb.bases()[b]
        assert np.allclose(B.conj() @ B.T, np.eye(d), atol=1e-12)
        for g in orb.generators(b):
            M = g.matrix()
            vals = np.einsum("si,ij,sj->s", B.conj(), M, B).real
            assert np.allclose(np.abs(vals), 1)


@pytest.mark.parametrize("n", [1, 2])
def test_orbit_matches_clifford_orbit(n):
    # every state reached by sampled Cliffords on |0> appears in the enumeration
    orb = cl.enumerate_stabilizer_states(n)
    z = make_fiducial(FiducialKind.stabilizer(), n)
    states = cl.sample_orbit_states(z, n, 400, seed=3, threads=1)
    overlap = np.abs(states.conj() @ orb.states.T) ** 2
    assert np.allclose(overlap.max(axis=1), 1)
    assert np.unique(overlap.argmax(axis=1)).size == orb.N


def test_span_size():
    for code in cl.lagrangian_codes(2):
        v = cl.span(int(code), 2)
        assert np.unique(v).size == 4


@pytest.mark.parametrize("n", [1, 2, 3])
def test_frame_potential_three_design(n):
    orb = cl.enumerate_stabilizer_states(n)
    for t in (1, 2, 3):
        got = cl.frame_potential(orb.states, t)
        assert got == pytest.approx(cl.design_frame_potential(orb.d, t), rel=1e-9)


def test_frame_potential_not_four_design():
    orb = cl.enumerate_stabilizer_states(2)
    ratio = cl.frame_potential(orb.states, 4) / cl.design_frame_potential(4, 4)
    assert ratio == pytest.approx(35 / 32)


def test_cache_roundtrip(tmp_path):
    orb = cl.enumerate_stabilizer_states(2)
    path = tmp_path / "o.clfd"
    cl.write_orbit_cache(path, 2, orb.states)
    assert np.array_equal(cl.read_orbit_cache(path, 2), orb.states)
    with pytest.raises(ValueError):
        cl.read_orbit_cache(path, 3)
    path.write_bytes(b"junkjunkjunkjunkjunk")
    with pytest.raises(ValueError):
        cl.read_orbit_cache(path, 2)


def test_cache_dir_used(tmp_path, monkeypatch):
    monkeypatch.setattr(cl, "_ORBITS", {})
    a = cl.enumerate_stabilizer_states(2, cache_dir=tmp_path)
    assert (tmp_path / "stabilizer_n2.clfd").exists()
    monkeypatch.setattr(cl, "_ORBITS", {})
    b = cl.enumerate_stabilizer_states(2, cache_dir=tmp_path)
    assert np.array_equal(a.states, b.states)


def test_bad_n():
    for n in (0, 6):
        with pytest.raises(ValueError):
            cl.enumerate_stabilizer_states(n)


def test_streams_reproducible_and_thread_invariant():
    z = make_fiducial(FiducialKind.magic(), 2)
    a = cl.sample_orbit_states(z, 2, 9000, seed=5, threads=1)
    b = cl.sample_orbit_states(z, 2, 9000, seed=5, threads=4)
    assert np.array_equal(a, b)
    head = cl.sample_orbit_states(z, 2, 100, seed=5, threads=1)
    assert np.array_equal(head, a[:100])
    c = cl.sample_orbit_states(z, 2, 100, seed=6, threads=1)
    assert not np.allclose(c, head)


def test_clifford_for_index_matches_tableaus():
    im, sg = cl.sample_tableaus(3, 9, 40, 3)
    for i in range(3):
        C = cl.clifford_for_index(3, 9, 40 + i)
        assert np.array_equal(C.images, im[i]) and C.signs == int(sg[i])



@pytest.mark.parametrize("n", [1, 2, 3])
def test_povm_completeness(n):
    orb = cl.enumerate_stabilizer_states(n)
    S = orb.states
    total = (orb.d / orb.N) * (S.T @ S.conj())
    assert np.allclose(total, np.eye(orb.d), atol=1e-10)


def test_expectation_covariance(rng):
    for _ in range(10):
        C = cl.sample_clifford(3, rng)
        psi = random_pure_state(8, rng)
        W = all_paulis(3)[int(rng.integers(1, 64))].matrix()
        phi = cl.clifford_apply(C, psi)
        lhs = np.vdot(phi, W @ phi)
        rhs = np.vdot(psi, C.unitary.conj().T @ W @ C.unitary @ psi)
        assert abs(lhs - rhs) < 1e-10
