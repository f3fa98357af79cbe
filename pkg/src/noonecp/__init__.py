"""Exact sparse Fock-space simulation of iterated NOON-state concentration.

The package simulates two single-photon-assisted schemes that distill a
maximally entangled N-photon NOON state from a partially entangled one,
round by round with failure recycling, and verifies the simulated success
probabilities against closed forms.
"""

from .analytics import (
    ORACLE_MATCH_TOLERANCE,
    SweepPoint,
    default_alpha_grid,
    figure3_sweep,
    p_round_closed_form,
    p_total_closed_form,
)
from .fock import (
    NORM_TOLERANCE,
    PRUNE_THRESHOLD,
    BasisKet,
    ModeId,
    PureState,
    basis_state,
    create,
    fidelity_up_to_global_phase,
    inner,
    normalized,
    norm_sq,
    superpose,
    tensor,
    vacuum,
)
from .optics import (
    PHASE_CLASS_TOLERANCE,
    BeamSplitterSpec,
    HomodyneOutcome,
    TaggedState,
    beam_splitter,
    cross_kerr_tag,
    detect_photon,
    homodyne_partition,
    negate_occupied,
    phase_flip,
)
from .protocols import (
    ECP1_DETECTORS,
    ECP2_DETECTORS,
    LOCAL_AUX_MODES,
    PROTOCOLS,
    SHARED_AUX_MODES,
    SIGNAL_MODES,
    ProtocolConfig,
    RoundOutcome,
    RoundStats,
    Schedule,
    apply_loss_model,
    maximally_entangled_noon,
    prepare_aux_ecp1,
    prepare_aux_ecp2,
    prepare_less_entangled_noon,
    run_round,
    run_schedule,
    vbs_transmission,
)

__version__ = "0.1.0"

__all__ = [
    "BasisKet",
    "BeamSplitterSpec",
    "HomodyneOutcome",
    "ModeId",
    "ORACLE_MATCH_TOLERANCE",
    "NORM_TOLERANCE",
    "PHASE_CLASS_TOLERANCE",
    "PROTOCOLS",
    "PRUNE_THRESHOLD",
    "ProtocolConfig",
    "PureState",
    "RoundOutcome",
    "RoundStats",
    "Schedule",
    "SweepPoint",
    "TaggedState",
    "apply_loss_model",
    "basis_state",
    "beam_splitter",
    "create",
    "cross_kerr_tag",
    "default_alpha_grid",
    "detect_photon",
    "fidelity_up_to_global_phase",
    "figure3_sweep",
    "homodyne_partition",
    "inner",
    "maximally_entangled_noon",
    "negate_occupied",
    "normalized",
    "norm_sq",
    "p_round_closed_form",
    "p_total_closed_form",
    "phase_flip",
    "prepare_aux_ecp1",
    "prepare_aux_ecp2",
    "prepare_less_entangled_noon",
    "run_round",
    "run_schedule",
    "superpose",
    "tensor",
    "vacuum",
    "vbs_transmission",
    "ECP1_DETECTORS",
    "ECP2_DETECTORS",
    "LOCAL_AUX_MODES",
    "SHARED_AUX_MODES",
    "SIGNAL_MODES",
]
