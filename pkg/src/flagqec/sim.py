"""Pauli-frame fault propagation through circuits.

Instead of simulating states, we track the Pauli difference between the
faulty run and the ideal run (the frame).  Clifford gates map Paulis to
Paulis, so the frame is propagated gate by gate as two bit masks (x, z) over
the circuit's qubits.  Faults inject extra Paulis after their gate;
measurements record whether the frame flips the outcome and then drop the
measured qubit's frame.

All recorded bits are relative to the noiseless run: a flip of 0 on a
syndrome label means the outcome a fault-free circuit would have produced.
Every builder in this package arranges its labeled measurements to read 0
noiselessly on valid input, so protocol code treats flips as outcomes.

Frame transformation rules (conjugation by the gate):
  h:            x <-> z
  cnot(c, t):   x_t ^= x_c ; z_c ^= z_t
  cz(a, b):     z_b ^= x_a ; z_a ^= x_b
  couple_P(d, a): x_a ^= [frame at d anticommutes P]; if z_a: frame_d *= P
  prep_*:       frame cleared (fresh qubit)
  meas_z/meas_x: flip = x-bit / z-bit of the measured qubit; frame dropped

couple_z(d, a) reproduces cnot(d, a) exactly; couple_x and couple_y are its
conjugates comparing the X and Y bases on the data side.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .circuit import Circuit, FaultLocation, Gate, data_label
from .pauli import PauliOperator

FaultSet = tuple[FaultLocation, ...]

_K_PREP_Z, _K_PREP_X, _K_H, _K_CNOT, _K_CZ, _K_COUPLE, _K_MEAS_Z, _K_MEAS_X = range(8)

_COUPLE_BITS = {"couple_x": (1, 0), "couple_y": (1, 1), "couple_z": (0, 1)}

ONE_QUBIT_FAULTS = ("X", "Y", "Z")
TWO_QUBIT_FAULTS = tuple(
    a + b for a, b in itertools.product("IXYZ", repeat=2) if a + b != "II"
)


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing rates: p2 for two-qubit gates, p1 for one-qubit gates,
    p_prep/p_meas for preparation and measurement flips."""

    p2: float
    p1: float
    p_prep: float
    p_meas: float

    def __post_init__(self) -> None:
        for name in ("p2", "p1", "p_prep", "p_meas"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")

    @classmethod
    def uniform(cls, p: float) -> "NoiseModel":
        """The default single-knob model: every rate equal to p."""
        return cls(p, p, p, p)


@dataclass(frozen=True)
class Frame:
    """Result of a propagation: residual error and per-label outcome flips.

    ``data_error`` lives on the block qubits d1..dn; ``leftover`` names any
    non-data qubit left unmeasured with a nontrivial frame (letter by id).
    """

    data_error: PauliOperator
    flips: Mapping[str, int]
    leftover: Mapping[str, str]

    def outcome(self, label: str) -> int:
        return self.flips[label]


class _Compiled:
    """Slot-indexed form of a circuit for the propagation inner loop."""

    def __init__(self, circuit: Circuit) -> None:
        self.circuit = circuit
        self.slot_of = {q.id: i for i, q in enumerate(circuit.qubits)}
        data_ids = circuit.data_ids()
        self.n_block = max((data_label(i) for i in data_ids), default=0)
        # bit mask of the slot holding block label k+1, or 0 if absent
        self.block_slot_mask = [0] * self.n_block
        for qid in data_ids:
            self.block_slot_mask[data_label(qid) - 1] = 1 << self.slot_of[qid]
        self.data_mask = 0
        for m in self.block_slot_mask:
            self.data_mask |= m

        steps = []
        for g in circuit.gates:
            a = 1 << self.slot_of[g.args[0]]
            b = 1 << self.slot_of[g.args[1]] if g.is_two_qubit else 0
            if g.op == "prep_z":
                steps.append((_K_PREP_Z, a, 0, 0, 0, None))
            elif g.op == "prep_x":
                steps.append((_K_PREP_X, a, 0, 0, 0, None))
            elif g.op == "h":
                steps.append((_K_H, a, 0, 0, 0, None))
            elif g.op == "cnot":
                steps.append((_K_CNOT, a, b, 0, 0, None))
            elif g.op == "cz":
                steps.append((_K_CZ, a, b, 0, 0, None))
            elif g.op in _COUPLE_BITS:
                px, pz = _COUPLE_BITS[g.op]
                steps.append((_K_COUPLE, a, b, px, pz, None))
            elif g.op == "meas_z":
                steps.append((_K_MEAS_Z, a, 0, 0, 0, g.label))
            else:
                steps.append((_K_MEAS_X, a, 0, 0, 0, g.label))
        self.steps = steps

    def pack_fault(self, loc: FaultLocation) -> tuple[int, int, int, int]:
        """(gate_index, x_mask, z_mask, outcome_flip) for one fault."""
        if not 0 <= loc.gate_index < len(self.steps):
            raise ValueError(f"fault on out-of-range gate {loc.gate_index}")
        gate = self.circuit.gates[loc.gate_index]
        if loc.pauli == "flip":
            if gate.is_meas:
                return loc.gate_index, 0, 0, 1
            if gate.op == "prep_z":
                return loc.gate_index, 1 << self.slot_of[gate.args[0]], 0, 0
            if gate.op == "prep_x":
                return loc.gate_index, 0, 1 << self.slot_of[gate.args[0]], 0
            raise ValueError(f"'flip' fault on non-prep/meas gate {gate.op}")
        if gate.is_meas or gate.is_prep:
            raise ValueError(f"{gate.op} only supports 'flip' faults")
        if len(loc.pauli) != (2 if gate.is_two_qubit else 1):
            raise ValueError(
                f"fault {loc.pauli!r} does not fit the support of {gate.op}"
            )
        xm = zm = 0
        for letter, qid in zip(loc.pauli, gate.args):
            bit = 1 << self.slot_of[qid]
            if letter in ("X", "Y"):
                xm |= bit
            if letter in ("Z", "Y"):
                zm |= bit
        return loc.gate_index, xm, zm, 0

    def run(
        self,
        packed_faults: Sequence[tuple[int, int, int, int]],
        incoming_x: int,
        incoming_z: int,
    ) -> Frame:
        """Propagate with faults in packed form and incoming frame already
        mapped onto slot masks."""
        fault_at: dict[int, tuple[int, int, int]] = {}
        for idx, xm, zm, flip in packed_faults:
            old = fault_at.get(idx, (0, 0, 0))
            fault_at[idx] = (old[0] ^ xm, old[1] ^ zm, old[2] ^ flip)

        x, z = incoming_x, incoming_z
        flips: dict[str, int] = {}
        for i, (kind, a, b, px, pz, label) in enumerate(self.steps):
            if kind == _K_CNOT:
                if x & a:
                    x ^= b
                if z & b:
                    z ^= a
            elif kind == _K_COUPLE:
                anti = (px and (z & a)) ^ (pz and (x & a))
                if anti:
                    x ^= b
                if z & b:
                    if px:
                        x ^= a
                    if pz:
                        z ^= a
            elif kind == _K_CZ:
                if x & a:
                    z ^= b
                if x & b:
                    z ^= a
            elif kind == _K_H:
                xa, za = x & a, z & a
                x = (x & ~a) | (a if za else 0)
                z = (z & ~a) | (a if xa else 0)
            elif kind in (_K_PREP_Z, _K_PREP_X):
                x &= ~a
                z &= ~a
            else:
                bit = 1 if ((x if kind == _K_MEAS_Z else z) & a) else 0
                x &= ~a
                z &= ~a
                flips[label] = bit
            if i in fault_at:
                fx, fz, fflip = fault_at[i]
                x ^= fx
                z ^= fz
                if fflip:
                    flips[label] ^= 1
        return self._finish(x, z, flips)

    def _finish(self, x: int, z: int, flips: dict[str, int]) -> Frame:
        dx = dz = 0
        for k, mask in enumerate(self.block_slot_mask):
            if x & mask:
                dx |= 1 << k
            if z & mask:
                dz |= 1 << k
        leftover = {}
        for qid, slot in self.slot_of.items():
            bit = 1 << slot
            if bit & self.data_mask or not (x & bit or z & bit):
                continue
            xb, zb = bool(x & bit), bool(z & bit)
            leftover[qid] = "Y" if (xb and zb) else ("X" if xb else "Z")
        error = PauliOperator(self.n_block, dx, dz) if self.n_block else None
        return Frame(
            error if error is not None else PauliOperator(1),
            MappingProxyType(flips),
            MappingProxyType(leftover),
        )

    def incoming_masks(self, incoming: PauliOperator | None) -> tuple[int, int]:
        if incoming is None:
            return 0, 0
        if incoming.n != self.n_block:
            raise ValueError(
                f"incoming frame has {incoming.n} qubits, block has {self.n_block}"
            )
        x = z = 0
        for k, mask in enumerate(self.block_slot_mask):
            if mask == 0 and ((incoming.x >> k) & 1 or (incoming.z >> k) & 1):
                raise ValueError(f"incoming frame touches absent data qubit d{k + 1}")
            if (incoming.x >> k) & 1:
                x |= mask
            if (incoming.z >> k) & 1:
                z |= mask
        return x, z


@lru_cache(maxsize=None)
def compile_circuit(circuit: Circuit) -> _Compiled:
    return _Compiled(circuit)


def propagate(
    circuit: Circuit,
    faults: Iterable[FaultLocation] = (),
    incoming: PauliOperator | None = None,
) -> Frame:
    """Run the frame through the circuit, injecting each fault after its gate."""
    comp = compile_circuit(circuit)
    packed = [comp.pack_fault(loc) for loc in faults]
    ix, iz = comp.incoming_masks(incoming)
    return comp.run(packed, ix, iz)


def enumerate_single_faults(circuit: Circuit) -> list[FaultSet]:
    """Every single-fault set: 15 per two-qubit gate, 3 per one-qubit gate,
    one flip per preparation and per measurement."""
    out: list[FaultSet] = []
    for i, g in enumerate(circuit.gates):
        if g.is_prep or g.is_meas:
            out.append((FaultLocation(i, "flip"),))
        elif g.is_two_qubit:
            out.extend((FaultLocation(i, p),) for p in TWO_QUBIT_FAULTS)
        else:
            out.extend((FaultLocation(i, p),) for p in ONE_QUBIT_FAULTS)
    return out


def fault_rate(gate: Gate, nm: NoiseModel) -> float:
    """Probability that this gate faults at all under the model."""
    if gate.is_two_qubit:
        return nm.p2
    if gate.is_prep:
        return nm.p_prep
    if gate.is_meas:
        return nm.p_meas
    return nm.p1


def fault_weight(loc_pauli: str, gate: Gate) -> float:
    """Per-Pauli probability weight at unit rate (1/15, 1/3, or 1)."""
    if gate.is_two_qubit:
        return 1.0 / 15.0
    if gate.is_prep or gate.is_meas:
        return 1.0
    return 1.0 / 3.0


def sample_faults(circuit: Circuit, nm: NoiseModel, rng) -> FaultSet:
    """Draw one fault set: each gate independently faulty at its rate, the
    fault Pauli uniform over the gate's nontrivial choices.

    ``rng`` is a numpy Generator; a fixed seed fixes the output.
    """
    gates = circuit.gates
    rates = _rate_vector(circuit, nm)
    u = rng.random(len(gates))
    out = []
    for i in (u < rates).nonzero()[0]:
        g = gates[i]
        if g.is_prep or g.is_meas:
            out.append(FaultLocation(int(i), "flip"))
        elif g.is_two_qubit:
            out.append(FaultLocation(int(i), TWO_QUBIT_FAULTS[rng.integers(15)]))
        else:
            out.append(FaultLocation(int(i), ONE_QUBIT_FAULTS[rng.integers(3)]))
    return tuple(out)


def _rate_vector(circuit: Circuit, nm: NoiseModel):
    import numpy as np

    return np.array([fault_rate(g, nm) for g in circuit.gates])
