"""Hot kernels with a compiled core and a numpy fallback.

The compiled module is used when it imports; set ``CLIFFPOVM_PURE_PYTHON=1``
to force the fallback.  Both backends return identical results (bitwise for
the integer kernels, to rounding for the complex ones).
"""
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

KERNEL_NAMES = (
    "pauli_apply_rows",
    "fwht_rows",
    "lagrangian_codes",
    "materialize_bases",
    "sample_symplectic",
    "clifford_unitary",
    "clifford_states",
)


def available_backends():
    return ["python"] + (["compiled"] if _ckernels is not None else [])


def get_backend(name=None):
    """Module implementing the kernels: ``"compiled"``, ``"python"`` or the default."""
    if name is None:
        name = BACKEND
    if name == "python":
        return _pykernels
    if name == "compiled":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


if _ckernels is not None and not os.environ.get("CLIFFPOVM_PURE_PYTHON"):
    BACKEND = "compiled"
else:
    BACKEND = "python"

_impl = get_backend(BACKEND)
pauli_apply_rows = _impl.pauli_apply_rows
fwht_rows = _impl.fwht_rows
lagrangian_codes = _impl.lagrangian_codes
materialize_bases = _impl.materialize_bases
sample_symplectic = _impl.sample_symplectic
clifford_unitary = _impl.clifford_unitary
clifford_states = _impl.clifford_states
