"""Coherence non-activating measurements and discord with incoherent measurements."""
from .channels import (
    KrausChannel,
    activation_demo,
    adjoint_apply,
    apply,
    apply_on_subsystem,
    is_coherence_non_activating,
    is_completely_qdi_nongenerating,
    is_cptp,
    is_gio,
    is_mio,
    library_channel,
)
from .discord import QdiReport, incoherent_correlation, monogamy_gap, qdi, qdi_povm_oracle
from .info import conditional_mutual_information, mutual_information, rel_entropy_coherence, von_neumann_entropy
from .linalg import dephase, hermitian_eig, partial_trace, tensor_product
from .measurement import (
    OrthonormalBasis,
    Povm,
    WitnessReport,
    conditional_states,
    is_incoherent,
    measure,
    noisy_projective,
    optimize_witness,
    parent_measurement,
    witness_value,
)
from .states import (
    DensityMatrix,
    build_zero_qdi_state,
    named_state,
    random_density,
    random_unitary,
    validate_density,
)

__version__ = "0.1.0"
