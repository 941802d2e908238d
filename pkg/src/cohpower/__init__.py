"""Coherence measures and the cohering / de-cohering powers of quantum channels."""
from .channels import (
    ChannelClassReport,
    InvalidChannelError,
    KrausChannel,
    Membership,
    apply,
    classify,
    compose,
    dephase,
    dephasing_channel,
    has_incoherent_kraus,
    identity_channel,
    is_dio,
    is_mio,
    tensor_with_identity,
    unitary_channel,
)
from .fileio import FormatError, parse_channel_file, parse_state_file, write_channel_file, write_state_file
from .fixtures import (
    fixture_coherence_preserving_channel,
    fixture_dio_counterexample,
    fixture_prop2_state,
    fixture_u0_rho0,
)
from .linalg import DEFAULT_TOL, PRINTED_TOL, ConvergenceError, hermitian_eigenvalues, is_unitary, one_to_one_norm
from .measures import (
    CoherenceMeasure,
    binary_entropy,
    c_l1,
    c_rel_ent,
    coherence,
    shannon_entropy,
    von_neumann_entropy,
)
from .optimize import OptimizerConfig
from .powers import (
    PowerKind,
    PowerReport,
    check_l1_vs_rel_inequality,
    cohering_power,
    decohering_power,
    dim_counterexample_unitary,
    generalized_cohering_power,
    generalized_decohering_power,
    lemma_entropy_inequality,
    qubit_c_ge_d_check,
    qubit_unitary_decohering_l1,
    qubit_unitary_decohering_rel,
    unitary_cohering_power_l1,
    unitary_cohering_power_rel,
)
from .states import (
    DensityMatrix,
    InvalidStateError,
    basis_state,
    bloch_to_density,
    density_from_factor,
    max_coherent_state,
    maximally_mixed,
    pure_density,
    tensor_state,
)

__version__ = "0.1.0"
