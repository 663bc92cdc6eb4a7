"""Distinguishability, moments and entropic relations of Clifford-orbit POVMs."""
__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .clifford import (
    CliffordElement,
    StabilizerOrbit,
    clifford_apply,
    enumerate_stabilizer_states,
    frame_potential,
    sample_clifford,
    stabilizer_count,
)
from .distinguish import (
    BiasEstimate,
    PovmSpec,
    bound_4design,
    bound_converse_pauli,
    bound_main,
    helstrom_bias,
    lambda_summary,
    povm_image_l1,
)
from .entropic import (
    DesignLevel,
    GridSpec,
    build_moment_lp,
    certainty_constants,
    exact_average_entropy,
    mutual_information,
    renyi,
    shannon,
    uncertainty_bound,
)
from .fiducials import (
    FiducialKind,
    alpha,
    beta,
    characteristic_function,
    make_fiducial,
)
from .linalg import effective_rank
from .moments import (
    berger_bound,
    clifford_fourth_moment,
    lemma_ratios,
    second_moment,
    tr_psym2,
    tr_psym4,
    tr_psym4_q,
)
from .pauli import PauliOperator, pauli_from_index, pauli_matrix, pauli_product
from .simplex import LinearProgram, LpSolution, solve_lp

__all__ = [name for name in dir() if not name.startswith("_")]
