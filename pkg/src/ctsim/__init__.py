"""Controlled teleportation over lossy fibers for single-rail optical qubits.

Simulates the three-party protocol where a controller's local measurement
gates the teleportation quality between sender and receiver, comparing
vacuum/single-photon and coherent-state encodings under amplitude damping:
conditioned/non-conditioned fidelities, control power, efficiency and the
maximized Bell-Svetlichny function.
"""

from ._backend import COMPILED
from .channel import (
    CoherentMsState,
    DampingParams,
    LindbladConfig,
    damp_coherent_pair,
    damp_vsp,
    evolve_ms_coherent,
    lindblad_integrate,
)
from .encodings import (
    CatBasis,
    CoherentEncoding,
    MsParams,
    cat_basis,
    charlie_basis,
    coherent_ket,
    fock_cutoff,
    ms_state_coherent,
    ms_state_vsp,
    tangle,
)
from .hilbert import (
    DensityOperator,
    Ket,
    OutcomeUnreachableError,
    eig_hermitian,
    kron,
    partial_trace,
    project,
    trace_distance,
)
from .nonlocality import (
    ModeSetting,
    QubitSetting,
    SvetlichnySettings,
    displaced_parity,
    maximize_svetlichny,
    rotated_sigma_z,
    svetlichny_value,
)
from .teleport import (
    CtFigures,
    closed_form_vsp,
    control_power,
    ct_pipeline_coherent,
    ct_pipeline_vsp,
    efficiency,
    fef_oracle,
    fully_entangled_fraction,
    teleport_fidelity,
)

__version__ = "0.1.0"

__all__ = [
    "COMPILED",
    "CatBasis",
    "CoherentEncoding",
    "CoherentMsState",
    "CtFigures",
    "DampingParams",
    "DensityOperator",
    "Ket",
    "LindbladConfig",
    "ModeSetting",
    "MsParams",
    "OutcomeUnreachableError",
    "QubitSetting",
    "SvetlichnySettings",
    "cat_basis",
    "charlie_basis",
    "closed_form_vsp",
    "coherent_ket",
    "control_power",
    "ct_pipeline_coherent",
    "ct_pipeline_vsp",
    "damp_coherent_pair",
    "damp_vsp",
    "displaced_parity",
    "efficiency",
    "eig_hermitian",
    "evolve_ms_coherent",
    "fef_oracle",
    "fock_cutoff",
    "fully_entangled_fraction",
    "kron",
    "lindblad_integrate",
    "maximize_svetlichny",
    "ms_state_coherent",
    "ms_state_vsp",
    "partial_trace",
    "project",
    "rotated_sigma_z",
    "svetlichny_value",
    "tangle",
    "teleport_fidelity",
    "trace_distance",
]
