import math

import numpy as np
import pytest

from cliffpovm import distinguish as ds
from cliffpovm.clifford import enumerate_stabilizer_states
from cliffpovm.fiducials import FiducialKind, alpha, make_fiducial
from cliffpovm.linalg import projector, random_density, random_hermitian, random_pure_state, trace_norm
from cliffpovm.moments import orbit_moments
from cliffpovm.pauli import all_paulis


def test_helstrom_examples():
    e0, e1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    assert ds.helstrom_bias(0.5, e0, e1) == pytest.approx(0.5)
    assert ds.helstrom_success(0.5, e0, e1) == pytest.approx(1.0)
    assert ds.helstrom_bias(0.5, e0, e0) == pytest.approx(0.0)
    plus = projector(np.array([1, 1]) / np.sqrt(2))
    # pure states: bias = sqrt(1 - |<a|b>|^2) / 2
    assert ds.helstrom_bias(0.5, e0, plus) == pytest.approx(math.sqrt(0.5) / 2)
    assert ds.helstrom_bias(0.8, e0, e0) == pytest.approx(0.3)
    with pytest.raises(ValueError):
        ds.helstrom_bias(1.5, e0, e1)


def test_povm_image_is_probability_vector(rng):
    spec = ds.PovmSpec.stabilizer(2)
    rho = random_density(4, rng)
    p = ds.povm_image(spec, rho)
    assert p.sum() == pytest.approx(1) and np.all(p >= -1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_povm_never_beats_helstrom(n, rng):
    spec = ds.PovmSpec.stabilizer(n)
    for _ in range(5):
        rho, sigma = random_density(2**n, rng), random_density(2**n, rng)
        assert ds.povm_bias(spec, 0.4, rho, sigma).value <= ds.helstrom_bias(0.4, rho, sigma) + 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_stabilizer_pauli_ratio(n):
    d = 2**n
    spec = ds.PovmSpec.stabilizer(n)
    z = make_fiducial(FiducialKind.stabilizer(), n)
    assert ds.bound_converse_pauli(z) == pytest.approx(1 / (d + 1))
    for p in all_paulis(n)[1:]:
        W = p.matrix()
        assert ds.povm_image_l1(spec, W).value / d == pytest.approx(1 / (d + 1), abs=1e-10)


@pytest.mark.parametrize("n", [1, 2])
def test_main_bound_chain(n, rng):
    d = 2**n
    spec = ds.PovmSpec.stabilizer(n)
    a = 1 / d
    for _ in range(20):
        X = random_hermitian(d, rng)
        got = ds.povm_image_l1(spec, X).value / trace_norm(X)
        mb = ds.bound_main(X, a)
        assert mb.kappa_ratio >= mb.ratio - 1e-12
        assert got >= mb.kappa_ratio - 1e-12
        assert got >= mb.regime_ratio - 1e-12
        assert mb.regime in ("good", "bad")


def test_kappa_below_exact_berger(rng):
    n, d = 2, 4
    orb = enumerate_stabilizer_states(n)
    X = random_hermitian(d, rng)
    rep = orbit_moments(orb, X)
    berger = d * rep.berger_lower
    via_kappa = np.linalg.norm(X) / math.sqrt(ds.kappa(X, 1 / d))
    assert via_kappa <= berger + 1e-12


def test_pure_pairs_stabilizer(rng):
    spec = ds.PovmSpec.stabilizer(2)
    for _ in range(50):
        X = projector(random_pure_state(4, rng)) - projector(random_pure_state(4, rng))
        assert ds.povm_image_l1(spec, X).value >= trace_norm(X) * ds.bound_pure_pair() - 1e-12


def test_worst_pure_pair(rng):
    res = ds.worst_pure_pair(1, rng, trials=20)
    assert res.candidates == 60
    assert res.min_ratio >= 1 / 6


def test_4design_bound():
    b = ds.bound_4design(np.diag([1.0, -1.0, 0, 0]))
    assert b.rank == 2 and b.ratio == pytest.approx(1 / (2 * math.sqrt(3)))
    b = ds.bound_4design(np.diag([1.0, 0.3, 0, 0]))
    assert b.constant > 0.4
    assert ds.bound_4design(np.eye(4)).ratio == pytest.approx(0.16)
    with pytest.raises(ValueError):
        ds.bound_4design(np.zeros((2, 2)))


def test_lambda_summary():
    d = 64
    s = ds.lambda_summary("stabilizer", d)
    assert s.lower <= s.upper
    m = ds.lambda_summary(FiducialKind.magic(), d)
    assert m.lower <= m.upper
    assert ds.lambda_summary("typical", d).upper is None
    with pytest.raises(ValueError):
        ds.lambda_summary("explicit", d)


def test_lambda_lower_bound_consistent():
    for n in (1, 2, 3):
        d = 2**n
        assert ds.lambda_lower_bound(1 / d, d) == pytest.approx(1 / math.sqrt(d * (6 * d + 10)))
        # stabilizer orbit: the worst Pauli ratio sits above the generic lower bound
        assert 1 / (d + 1) >= ds.lambda_lower_bound(1 / d, d)


def test_magic_converse_monte_carlo():
    n, d = 2, 4
    z = make_fiducial(FiducialKind.magic(), n)
    spec = ds.PovmSpec.monte_carlo(n, FiducialKind.magic(), 20000, seed=1, threads=2)
    W = all_paulis(n)[5].matrix()
    est = ds.povm_image_l1(spec, W)
    assert abs(est.value / d - ds.bound_converse_pauli(z)) < 5 * est.std_error / d + 1e-12
    assert alpha(z) == pytest.approx(1 / 9)


def test_spec_validation():
    with pytest.raises(ValueError):
        ds.PovmSpec.monte_carlo(2, FiducialKind.magic(), 10, seed=0)
    with pytest.raises(ValueError):
        ds.povm_image_l1(ds.PovmSpec.stabilizer(1), np.eye(4))


def test_generic_bound_values():
    X = np.diag([1.0, -1.0, 0, 0])
    assert ds.bound_generic(X) == pytest.approx(1 / math.sqrt(44))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_main_bound_never_violated_exact(n, rng):
    d = 2**n
    spec = ds.PovmSpec.stabilizer(n)
    for _ in range(200 // 3 + 1):
        X = random_hermitian(d, rng)
        got = ds.povm_image_l1(spec, X).value
        assert got >= ds.bound_main(X, 1 / d).ratio * trace_norm(X)
        assert got <= trace_norm(X) * (1 + 1e-12)


@pytest.mark.parametrize("kind", [FiducialKind.magic(), FiducialKind.haar(3)])
def test_main_bound_never_violated_monte_carlo(kind, rng):
    n, d = 2, 4
    spec = ds.PovmSpec.monte_carlo(n, kind, 20000, seed=2)
    a = alpha(make_fiducial(kind, n))
    for _ in range(100):
        X = random_hermitian(d, rng)
        est = ds.povm_image_l1(spec, X)
        assert est.value + 5 * est.std_error >= ds.bound_main(X, a).ratio * trace_norm(X)
        assert est.value - 5 * est.std_error <= trace_norm(X)


def test_pure_pair_exact_vs_monte_carlo(rng):
    exact = ds.PovmSpec.stabilizer(2)
    mc = ds.PovmSpec.monte_carlo(2, FiducialKind.stabilizer(), 100_000, seed=8)
    X = projector(random_pure_state(4, rng)) - projector(random_pure_state(4, rng))
    est = ds.povm_image_l1(mc, X)
    assert abs(est.value - ds.povm_image_l1(exact, X).value) <= 4 * est.std_error


def test_converse_equality_n2():
    z = make_fiducial(FiducialKind.stabilizer(), 2)
    spec = ds.PovmSpec.stabilizer(2)
    for p in all_paulis(2)[1:]:
        got = ds.povm_image_l1(spec, p.matrix()).value / 4
        assert abs(got - ds.bound_converse_pauli(z)) < 1e-10
