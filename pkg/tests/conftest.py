import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def dense_pauli(label: str) -> np.ndarray:
    """Kronecker product of single-qubit matrices, leftmost factor = highest qubit."""
    mats = {
        "I": np.eye(2, dtype=complex),
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    }
    out = np.ones((1, 1), dtype=complex)
    for ch in label:
        out = np.kron(out, mats[ch])
    return out
