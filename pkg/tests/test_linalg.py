import numpy as np
import pytest

from cliffpovm.linalg import (
    as_hermitian,
    as_pure_state,
    as_state,
    effective_rank,
    lp_norm,
    num_qubits,
    numerical_rank,
    random_density,
    random_hermitian,
    random_pure_state,
    schatten_norm,
    trace_norm,
)


def test_num_qubits():
    assert num_qubits(8) == 3
    for bad in (0, 3, 6):
        with pytest.raises(ValueError):
            num_qubits(bad)


def test_validation():
    with pytest.raises(ValueError):
        as_hermitian(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        as_pure_state(np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        as_state(np.diag([1.5, -0.5]))


def test_norms_diag():
    X = np.diag([3.0, -1.0, 0.0, 0.0])
    assert trace_norm(X) == pytest.approx(4)
    assert schatten_norm(X, 2) == pytest.approx(np.sqrt(10))
    assert lp_norm([3, -4], 2) == pytest.approx(5)
    assert numerical_rank(X) == 2
    assert effective_rank(X) == pytest.approx(16 / 10)


def test_effective_rank_of_zero():
    with pytest.raises(ValueError):
        effective_rank(np.zeros((2, 2)))


def test_random_objects(rng):
    H = random_hermitian(4, rng)
    assert np.allclose(H, H.conj().T)
    z = random_pure_state(8, rng)
    assert np.linalg.norm(z) == pytest.approx(1)
    rho = random_density(4, rng, rank=2)
    assert np.trace(rho).real == pytest.approx(1)
    assert numerical_rank(rho) == 2
