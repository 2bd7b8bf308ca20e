"""Channel adversaries for the GHZ-carrier protocol.

Three strategies are modeled:

- ``NO_ATTACK``: the channel is untouched.
- ``INTERCEPT_RESEND``: Eve measures S1 in the computational basis every
  round and forwards the collapsed qubit. This collapses the carrier and is
  eventually detectable through the public comparison.
- ``CNOT_ANCILLA``: Eve entangles a private |0> ancilla into the carrier
  with one CNOT in round 1, mirrors the parties' round-end Hadamards, rides
  along invisibly through even rounds, and in odd rounds >= 3 disentangles
  S1 with a CNOT from her ancilla, reads it out deterministically, and
  restores the state with a second CNOT. Her readouts r_k satisfy
  r_k = q_k XOR q_1, so any publicly announced odd-indexed bit resolves the
  offset q_1 and with it every odd-indexed data bit.

Eve may only ever touch her own ancilla E and the in-transit qubit S1; every
gate and measurement she performs is routed through a guard that raises
:class:`EveScopeViolation` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .statevector import StateVector, apply_cnot, apply_h, measure_z
from .protocol import RoundParity, round_parity


class AttackKind(Enum):
    NO_ATTACK = "none"
    INTERCEPT_RESEND = "intercept-resend"
    CNOT_ANCILLA = "cnot-ancilla"

    @classmethod
    def from_name(cls, name: str) -> "AttackKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(f"unknown attack kind {name!r}; expected one of "
                         f"{[k.value for k in cls]}")


#: The only qubits the adversary is allowed to address.
EVE_TOUCHABLE = frozenset({"E", "S1"})


class EveScopeViolation(RuntimeError):
    """An adversary operation addressed a qubit outside Eve's reach."""


class EveInferenceError(RuntimeError):
    """Eve's bookkeeping reached a state that is impossible in a correct run."""


@dataclass
class EveRecord:
    """Eve's per-trial notebook.

    ``measured`` maps odd round indices >= 3 to the readout r_k (only the
    CNOT-ancilla strategy records anything). ``probabilities`` keeps the Born
    probability of each readout as a diagnostic; in a correct run every entry
    is 1. Post-processing fills either the inferred fields or, when no odd
    index was announced, the ``ambiguous`` flag plus the two candidate
    sequences for the odd-indexed bits.
    """

    measured: dict[int, int] = field(default_factory=dict)
    probabilities: dict[int, float] = field(default_factory=dict)
    rounds_seen: int = 0
    inferred_offset: int | None = None
    inferred_bits: dict[int, int] | None = None
    ambiguous: bool = False
    candidates: tuple[dict[int, int], dict[int, int]] | None = None


def _guard(*qubits: str) -> None:
    bad = [q for q in qubits if q not in EVE_TOUCHABLE]
    if bad:
        raise EveScopeViolation(
            f"adversary attempted to touch {bad!r}; allowed qubits are "
            f"{sorted(EVE_TOUCHABLE)!r}"
        )


def _guarded_cnot(state: StateVector, control: str, target: str) -> StateVector:
    _guard(control, target)
    return apply_cnot(state, control, target)


def _guarded_h(state: StateVector, q: str) -> StateVector:
    _guard(q)
    return apply_h(state, q)


def _guarded_measure(state: StateVector, q: str, draw: float):
    _guard(q)
    return measure_z(state, q, draw)


def eve_on_transit(
    kind: AttackKind,
    k: int,
    joint: StateVector,
    record: EveRecord,
    draw: float | None = None,
    observer=None,
):
    """Eve's action on the in-transit qubit S1 during round ``k``.

    Called exactly once per round, after Alice's entangling CNOTs and before
    Bob's receiving CNOT. ``draw`` feeds any measurement Eve performs;
    ``observer(stage, state)`` reports her intermediate states when tracing.
    Returns the (possibly transformed) joint state and the updated record.
    """
    record.rounds_seen = k
    if kind is AttackKind.NO_ATTACK:
        return joint, record

    if kind is AttackKind.INTERCEPT_RESEND:
        _, joint, _ = _guarded_measure(joint, "S1", draw)
        if observer is not None:
            observer("after Eve measure-and-resend of S1", joint)
        return joint, record

    # CNOT-ancilla strategy.
    if k == 1:
        joint = _guarded_cnot(joint, "S1", "E")
        if observer is not None:
            observer("after Eve C(S1->E)", joint)
        return joint, record

    if round_parity(k) is RoundParity.EVEN:
        joint = _guarded_cnot(joint, "E", "S1")
        if observer is not None:
            observer("after Eve C(E->S1)", joint)
        return joint, record

    # Odd rounds >= 3: disentangle S1, read it, restore.
    joint = _guarded_cnot(joint, "E", "S1")
    if observer is not None:
        observer("after Eve C(E->S1)", joint)
    outcome, joint, mrec = _guarded_measure(joint, "S1", draw)
    record.measured[k] = outcome
    record.probabilities[k] = mrec.probability
    if observer is not None:
        observer("after Eve measurement of S1", joint)
    joint = _guarded_cnot(joint, "E", "S1")
    if observer is not None:
        observer("after Eve restoring C(E->S1)", joint)
    return joint, record


def eve_end_round(kind: AttackKind, joint: StateVector) -> StateVector:
    """Eve's round-end hook: the CNOT-ancilla strategy mirrors the parties'
    Hadamards on her ancilla; the other strategies do nothing."""
    if kind is AttackKind.CNOT_ANCILLA:
        return _guarded_h(joint, "E")
    return joint


def _candidate_sequences(record: EveRecord) -> tuple[dict[int, int], dict[int, int]]:
    cand0 = {1: 0, **record.measured}
    cand1 = {1: 1, **{k: r ^ 1 for k, r in record.measured.items()}}
    return cand0, cand1


def eve_postprocess(record: EveRecord, announced: dict[int, int]) -> EveRecord:
    """Resolve Eve's readouts against the publicly announced bits.

    Any announced odd index j fixes the offset (the announced value itself
    for j = 1, otherwise r_j XOR q_j); the offset then decodes every recorded
    odd round. Multiple announced odd indices are cross-checked and must
    agree. If only even indices were announced, the record stays ambiguous
    with both candidate sequences retained.
    """
    offsets: list[int] = []
    for j in sorted(announced):
        if not 1 <= j <= record.rounds_seen:
            raise ValueError(
                f"announced index {j} outside the {record.rounds_seen} observed round(s)"
            )
        if j % 2 == 0:
            continue
        if j == 1:
            offsets.append(announced[j])
        else:
            if j not in record.measured:
                raise ValueError(f"announced odd index {j} has no recorded readout")
            offsets.append(record.measured[j] ^ announced[j])
    if not offsets:
        return replace(
            record,
            inferred_offset=None,
            inferred_bits=None,
            ambiguous=True,
            candidates=_candidate_sequences(record),
        )
    if len(set(offsets)) != 1:
        raise EveInferenceError(f"announced odd indices imply conflicting offsets {offsets!r}")
    offset = offsets[0]
    inferred = {1: offset}
    for k, r in record.measured.items():
        inferred[k] = r ^ offset
    return replace(
        record,
        inferred_offset=offset,
        inferred_bits=inferred,
        ambiguous=False,
        candidates=None,
    )
