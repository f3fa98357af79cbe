"""Round-by-round execution of two NOON-state concentration schemes.

Both schemes start from a partially entangled N-photon state
alpha|N,0> + beta|0,N> shared on modes (a1, b1) and distill the balanced
superposition using one auxiliary photon per round:

* ``ecp1`` consumes an auxiliary photon prepared in the same alpha/beta
  superposition across two spatial modes (it has to travel alongside the
  signal, which is why channel loss hits this scheme twice per round).
* ``ecp2`` consumes a locally prepared auxiliary photon split on a variable
  beam splitter whose transmissivity is retuned every round.

A round proceeds the same way in both schemes: tag the N-photon mode with
a probe phase of -theta/N per photon and the auxiliary mode with +theta,
read the probe out, mix the auxiliary modes on a balanced splitter and
detect the photon. The |theta| reading heralds success (balanced output
after a sign correction on second-detector clicks); the 0 reading leaves a
squared-coefficient copy of the input, which is recycled into the next
round. Success probabilities are identical between the schemes in the
lossless model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .fock import (
    ModeId,
    PureState,
    basis_state,
    fidelity_up_to_global_phase,
    normalized,
    superpose,
    tensor,
)
from .optics import (
    PHASE_CLASS_TOLERANCE,
    BeamSplitterSpec,
    beam_splitter,
    cross_kerr_tag,
    detect_photon,
    homodyne_partition,
    negate_occupied,
)

PROTOCOLS = ("ecp1", "ecp2")

# Default mode labels: signal pair, shared-scheme auxiliary pair, local-scheme
# auxiliary pair, and the detector labels each scheme's final splitter feeds.
SIGNAL_MODES = ("a1", "b1")
SHARED_AUX_MODES = ("a2", "b2")
LOCAL_AUX_MODES = ("c1", "c2")
ECP1_DETECTORS = ("d1", "d2")
ECP2_DETECTORS = ("e1", "e2")

# Internal consistency checks on folded detector branches.
_FOLD_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ProtocolConfig:
    """Everything one concentration run depends on.

    alpha is the real positive coefficient of the |N,0> component; the
    |0,N> coefficient is sqrt(1 - alpha^2). theta is the probe phase per
    auxiliary photon (its sign and magnitude only need to keep the success
    and failure readings distinguishable). loss_eta is the single-pass
    channel transmission used by ``apply_loss_model``.
    """

    protocol: str
    alpha: float
    n_photons: int = 1
    max_rounds: int = 10
    theta: float = 0.1
    loss_eta: float = 1.0

    def __post_init__(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        a = self.alpha
        if not (isinstance(a, (int, float)) and math.isfinite(a) and 0.0 < a < 1.0):
            raise ValueError(f"alpha must lie strictly inside (0, 1), got {a!r}")
        if not isinstance(self.n_photons, int) or self.n_photons < 1:
            raise ValueError(f"n_photons must be a positive integer, got {self.n_photons!r}")
        if not isinstance(self.max_rounds, int) or self.max_rounds < 1:
            raise ValueError(f"max_rounds must be a positive integer, got {self.max_rounds!r}")
        th = self.theta
        if not (isinstance(th, (int, float)) and math.isfinite(th)):
            raise ValueError(f"theta must be a finite real, got {th!r}")
        if abs(th) <= PHASE_CLASS_TOLERANCE:
            raise ValueError(
                "theta must exceed the homodyne phase tolerance "
                f"{PHASE_CLASS_TOLERANCE} in magnitude, got {th!r}"
            )
        eta = self.loss_eta
        if not (isinstance(eta, (int, float)) and math.isfinite(eta) and 0.0 <= eta <= 1.0):
            raise ValueError(f"loss_eta must lie in [0, 1], got {eta!r}")

    @property
    def beta(self) -> float:
        return math.sqrt(1.0 - self.alpha * self.alpha)


@dataclass(frozen=True)
class RoundOutcome:
    """Both heralded branches of one round.

    success_state is the corrected post-detection state for the |theta|
    probe reading (None when that reading has zero probability, which
    happens only for degenerate single-component inputs). failure_state is
    the recycled squared-coefficient state for the 0 reading.
    corrections_applied records which detector clicks required the sign
    correction, as "branch:detector:negate(mode)" strings.
    """

    round_index: int
    success_state: PureState | None
    success_prob: float
    failure_state: PureState
    failure_prob: float
    vbs_transmission_used: float | None
    corrections_applied: tuple[str, ...]


class RoundStats(NamedTuple):
    round_index: int
    vbs_transmission: float | None
    p_conditional: float
    p_unconditional: float
    success_fidelity: float


@dataclass(frozen=True)
class Schedule:
    """Per-round statistics of a full run plus the total success probability.

    p_unconditional of round k is p_conditional scaled by the probability
    of having failed every earlier round; p_total is the sum of the
    unconditional column. success_fidelity is measured against the balanced
    target and is NaN for rounds whose success reading has zero probability.
    """

    protocol: str
    alpha: float
    n_photons: int
    per_round: tuple[RoundStats, ...]
    p_total: float


def prepare_less_entangled_noon(
    alpha: float, n_photons: int, modes: tuple[ModeId, ModeId] = SIGNAL_MODES
) -> PureState:
    """alpha|N,0> + sqrt(1-alpha^2)|0,N> on the two given modes."""
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie strictly inside (0, 1), got {alpha!r}")
    if not isinstance(n_photons, int) or n_photons < 1:
        raise ValueError(f"n_photons must be a positive integer, got {n_photons!r}")
    beta = math.sqrt(1.0 - alpha * alpha)
    n = n_photons
    return superpose(
        [
            (alpha, basis_state(modes, (n, 0))),
            (beta, basis_state(modes, (0, n))),
        ]
    )


def maximally_entangled_noon(
    n_photons: int, modes: tuple[ModeId, ModeId] = SIGNAL_MODES
) -> PureState:
    """The balanced target (|N,0> + |0,N>)/sqrt(2)."""
    if not isinstance(n_photons, int) or n_photons < 1:
        raise ValueError(f"n_photons must be a positive integer, got {n_photons!r}")
    r = 1.0 / math.sqrt(2.0)
    n = n_photons
    return superpose(
        [
            (r, basis_state(modes, (n, 0))),
            (r, basis_state(modes, (0, n))),
        ]
    )


def prepare_aux_ecp1(
    alpha: float, modes: tuple[ModeId, ModeId] = SHARED_AUX_MODES
) -> PureState:
    """Single photon in alpha|1,0> + sqrt(1-alpha^2)|0,1> across two modes.

    The shared scheme needs the auxiliary coefficients to match the current
    round's signal coefficients.
    """
    return prepare_less_entangled_noon(alpha, 1, modes)


def prepare_aux_ecp2(
    transmissivity: float, modes: tuple[ModeId, ModeId] = LOCAL_AUX_MODES
) -> PureState:
    """Single photon split on a variable beam splitter.

    Sends one photon into the first port; the output is
    sqrt(1-t)|1,0> + sqrt(t)|0,1> on ``modes``. t = 0 and t = 1 are allowed
    and give an unentangled photon (the round then never succeeds).
    """
    photon = basis_state(modes, (1, 0))
    spec = BeamSplitterSpec(
        mode_in_1=modes[0],
        mode_in_2=modes[1],
        mode_out_1=modes[0],
        mode_out_2=modes[1],
        transmissivity=transmissivity,
        sign_convention="ecp2",
    )
    return beam_splitter(photon, spec)


def vbs_transmission(alpha: float, round_k: int) -> float:
    """Round-k transmissivity t_k = a^(2^k) / (a^(2^k) + b^(2^k)).

    Evaluated through the ratio (min/max)^(2^(k-1)) of the squared
    coefficients, so deep rounds cannot hit 0/0 underflow; exact 0.5 for
    the balanced state at any depth.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie strictly inside (0, 1), got {alpha!r}")
    if not isinstance(round_k, int) or round_k < 1:
        raise ValueError(f"round index must be a positive integer, got {round_k!r}")
    x = alpha * alpha
    y = 1.0 - x
    e = 2 ** (round_k - 1)
    if x == y:
        return 0.5
    if x < y:
        r = (x / y) ** e
        return r / (1.0 + r)
    r = (y / x) ** e
    return 1.0 / (1.0 + r)


def _noon_coefficients(state: PureState) -> tuple[float, float, int]:
    """Validate a (possibly degenerate) NOON-form state and pull (ca, cb, N).

    Accepts one or two terms shaped (N,0)/(0,N) with real non-negative
    amplitudes on a two-mode register; a missing term counts as coefficient
    zero (it may have been pruned after deep recycling).
    """
    if len(state.register) != 2:
        raise ValueError(
            f"expected a two-mode state, got register {state.register!r}"
        )
    terms = dict(state.terms)
    if not 1 <= len(terms) <= 2:
        raise ValueError(f"expected a NOON-form state, got {state!r}")
    n = 0
    for ket in terms:
        occupied = [v for v in ket if v > 0]
        if len(occupied) != 1:
            raise ValueError(f"branch {ket!r} is not a NOON component")
        if n and occupied[0] != n:
            raise ValueError(f"mixed photon numbers in {state!r}")
        n = occupied[0]
    ca = terms.get((n, 0), 0j)
    cb = terms.get((0, n), 0j)
    if len(terms) == 2 and (ca == 0j or cb == 0j):
        raise ValueError(f"expected components (N,0) and (0,N), got {state!r}")
    for c in (ca, cb):
        if abs(c.imag) > 1e-9 or c.real < -1e-9:
            raise ValueError(
                f"NOON coefficients must be real and non-negative, got {state!r}"
            )
    return max(ca.real, 0.0), max(cb.real, 0.0), n


def _interfere_and_detect(
    branch: PureState,
    aux_modes: tuple[ModeId, ModeId],
    detectors: tuple[ModeId, ModeId],
    convention: str,
    sign_mode: ModeId,
    label: str,
) -> tuple[PureState, list[str]]:
    """Balanced splitter on the auxiliary pair, detect, correct, fold.

    Both detector outcomes are kept: a click on the second detector gets the
    sign correction on the N-photon mode, after which the two projected
    states agree up to a global phase. The first-detector branch (always
    present, with real non-negative amplitudes) is returned as the folded
    state.
    """
    spec = BeamSplitterSpec(
        mode_in_1=aux_modes[0],
        mode_in_2=aux_modes[1],
        mode_out_1=detectors[0],
        mode_out_2=detectors[1],
        transmissivity=0.5,
        sign_convention=convention,
    )
    mixed = beam_splitter(branch, spec)
    clicks = detect_photon(mixed, detectors)
    corrected: list[PureState] = []
    notes: list[str] = []
    for fired, projected, _prob in clicks:
        if fired == detectors[1]:
            projected = negate_occupied(projected, sign_mode)
            notes.append(f"{label}:{fired}:negate({sign_mode})")
        corrected.append(projected)
    folded = corrected[0]
    for other in corrected[1:]:
        fid = fidelity_up_to_global_phase(folded, other)
        if abs(fid - 1.0) > _FOLD_TOLERANCE:
            raise ValueError(
                f"detector branches disagree after correction (fidelity {fid})"
            )
    return folded, notes


def run_round(state: PureState, config: ProtocolConfig, round_k: int) -> RoundOutcome:
    """Execute one concentration round on a NOON-form input state.

    The input lives on two signal modes (register order fixes which mode
    carries the N-photon component of the first term). Auxiliary and
    detector modes use the package-default labels, so the signal register
    must not collide with them.

    Returns both heralded branches; the failure branch always exists and
    carries the squared, renormalized coefficients of the input. Detection
    after the probe reading is deterministic in this idealized model, so
    the success probability equals the |theta| reading's probability.
    """
    if not isinstance(round_k, int) or round_k < 1:
        raise ValueError(f"round index must be a positive integer, got {round_k!r}")
    ca, cb, n = _noon_coefficients(state)
    if n != config.n_photons:
        raise ValueError(
            f"state carries N={n} photons but config expects N={config.n_photons}"
        )
    sig_b = state.register[1]
    theta = config.theta

    if config.protocol == "ecp1":
        aux_modes = SHARED_AUX_MODES
        detectors = ECP1_DETECTORS
        convention = "ecp1"
        t_used: float | None = None
        aux = superpose(
            [
                (ca, basis_state(aux_modes, (1, 0))),
                (cb, basis_state(aux_modes, (0, 1))),
            ]
        )
        tag_mode = aux_modes[1]
    else:
        aux_modes = LOCAL_AUX_MODES
        detectors = ECP2_DETECTORS
        convention = "ecp2"
        t_used = vbs_transmission(config.alpha, round_k)
        aux = prepare_aux_ecp2(t_used, aux_modes)
        tag_mode = aux_modes[0]

    for lbl in aux_modes + detectors:
        if lbl in state.register:
            raise ValueError(
                f"signal register {state.register!r} collides with reserved label {lbl!r}"
            )

    joint = tensor(state, aux)
    tagged = cross_kerr_tag(joint, sig_b, -theta / n)
    tagged = cross_kerr_tag(tagged, tag_mode, theta)
    readings = homodyne_partition(tagged)

    success_reading = None
    failure_reading = None
    for reading in readings:
        if reading.phase_class < PHASE_CLASS_TOLERANCE:
            failure_reading = reading
        elif abs(reading.phase_class - abs(theta)) < PHASE_CLASS_TOLERANCE:
            success_reading = reading
        else:
            raise ValueError(
                f"unexpected probe phase class {reading.phase_class!r}"
            )
    if failure_reading is None:
        raise ValueError("probe readout produced no recyclable branch")

    notes: list[str] = []
    if success_reading is not None:
        success_state, n1 = _interfere_and_detect(
            success_reading.branch, aux_modes, detectors, convention, sig_b, "success"
        )
        success_prob = success_reading.probability
        notes.extend(n1)
    else:
        success_state = None
        success_prob = 0.0

    failure_state, n2 = _interfere_and_detect(
        failure_reading.branch, aux_modes, detectors, convention, sig_b, "failure"
    )
    notes.extend(n2)

    return RoundOutcome(
        round_index=round_k,
        success_state=success_state,
        success_prob=success_prob,
        failure_state=failure_state,
        failure_prob=failure_reading.probability,
        vbs_transmission_used=t_used,
        corrections_applied=tuple(notes),
    )


def run_schedule(config: ProtocolConfig) -> Schedule:
    """Run max_rounds rounds, recycling every failure branch.

    Conditional probabilities come straight from each round; unconditional
    ones are weighted by the survival product of earlier failures. The
    schedule is lossless; ``apply_loss_model`` folds channel transmission
    in afterwards.
    """
    state = prepare_less_entangled_noon(config.alpha, config.n_photons, SIGNAL_MODES)
    target = maximally_entangled_noon(config.n_photons, SIGNAL_MODES)
    rows: list[RoundStats] = []
    survival = 1.0
    p_total = 0.0
    for k in range(1, config.max_rounds + 1):
        outcome = run_round(state, config, k)
        if outcome.success_state is not None:
            fidelity = fidelity_up_to_global_phase(outcome.success_state, target)
        else:
            fidelity = math.nan
        unconditional = outcome.success_prob * survival
        rows.append(
            RoundStats(
                round_index=k,
                vbs_transmission=outcome.vbs_transmission_used,
                p_conditional=outcome.success_prob,
                p_unconditional=unconditional,
                success_fidelity=fidelity,
            )
        )
        p_total += unconditional
        survival *= outcome.failure_prob
        state = outcome.failure_state
    return Schedule(
        protocol=config.protocol,
        alpha=config.alpha,
        n_photons=config.n_photons,
        per_round=tuple(rows),
        p_total=p_total,
    )


def apply_loss_model(schedule: Schedule, config: ProtocolConfig) -> Schedule:
    """Fold heralded channel loss into a lossless schedule.

    The shared scheme's auxiliary photon crosses the lossy channel twice
    per round, so every success probability is scaled by loss_eta^2; the
    local scheme never exposes its auxiliary photon to the channel and is
    returned unchanged. Failure recycling is left untouched (loss is
    heralded away in this idealization).
    """
    if schedule.protocol != config.protocol:
        raise ValueError(
            f"schedule is for {schedule.protocol!r} but config says {config.protocol!r}"
        )
    if config.protocol == "ecp2" or config.loss_eta == 1.0:
        return schedule
    f = config.loss_eta * config.loss_eta
    rows = tuple(
        RoundStats(
            round_index=r.round_index,
            vbs_transmission=r.vbs_transmission,
            p_conditional=r.p_conditional * f,
            p_unconditional=r.p_unconditional * f,
            success_fidelity=r.success_fidelity,
        )
        for r in schedule.per_round
    )
    return replace(schedule, per_round=rows, p_total=schedule.p_total * f)
