"""Straight-line Clifford circuit IR with explicit fault locations.

A circuit is an immutable list of gates over named qubits.  Ten gate ops
exist: prep_z, prep_x, h, cnot, cz, couple_x, couple_y, couple_z, meas_z,
meas_x.  The couple_* gates are the parity-accumulation primitive used by
syndrome extraction: couple_P(data, ancilla) acts like CNOT(data->ancilla)
conjugated on the data side so that the basis being compared is P.  For the
Pauli-frame propagation rules see sim.py; this module only carries structure.

Conventions baked into validation:
  - data qubits are named "d<k>" with k the 1-based block label; they may be
    used without an in-circuit preparation (incoming data);
  - every other qubit must be prepared before first use, may be re-prepared
    after a measurement, and is dead once measured;
  - measurement labels are unique per circuit and are the only handles the
    protocol layer uses (never gate indices).

Post-selection is metadata: ``accept`` lists (label, required value) pairs.
The JSON form mirrors the dataclasses one-to-one and round-trips exactly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

ONE_QUBIT_OPS = frozenset({"prep_z", "prep_x", "h", "meas_z", "meas_x"})
TWO_QUBIT_OPS = frozenset({"cnot", "cz", "couple_x", "couple_y", "couple_z"})
PREP_OPS = frozenset({"prep_z", "prep_x"})
MEAS_OPS = frozenset({"meas_z", "meas_x"})
ALL_OPS = ONE_QUBIT_OPS | TWO_QUBIT_OPS

ROLES = ("data", "syndrome", "flag", "cat")

_DATA_ID_RE = re.compile(r"^d([1-9]\d*)$")


def data_label(qubit_id: str) -> int:
    """The 1-based block label encoded in a data qubit id like "d3"."""
    m = _DATA_ID_RE.match(qubit_id)
    if m is None:
        raise ValueError(f"not a data qubit id: {qubit_id!r}")
    return int(m.group(1))


@dataclass(frozen=True)
class Qubit:
    id: str
    role: str

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("empty qubit id")
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r} for qubit {self.id!r}")
        if self.role == "data" and _DATA_ID_RE.match(self.id) is None:
            raise ValueError(f"data qubit id must look like 'd3', got {self.id!r}")


@dataclass(frozen=True)
class Gate:
    """One gate: an op name, its qubit arguments, and a label if measuring."""

    op: str
    args: tuple[str, ...]
    label: str | None = None

    def __post_init__(self) -> None:
        if self.op not in ALL_OPS:
            raise ValueError(f"unknown op {self.op!r}")
        arity = 2 if self.op in TWO_QUBIT_OPS else 1
        if len(self.args) != arity:
            raise ValueError(
                f"{self.op} takes {arity} qubit(s), got {len(self.args)}"
            )
        if arity == 2 and self.args[0] == self.args[1]:
            raise ValueError(f"{self.op} needs two distinct qubits: {self.args}")
        if self.op in MEAS_OPS:
            if not self.label:
                raise ValueError(f"{self.op} on {self.args[0]!r} needs a label")
        elif self.label is not None:
            raise ValueError(f"{self.op} cannot carry a label")

    @property
    def is_two_qubit(self) -> bool:
        return self.op in TWO_QUBIT_OPS

    @property
    def is_prep(self) -> bool:
        return self.op in PREP_OPS

    @property
    def is_meas(self) -> bool:
        return self.op in MEAS_OPS


@dataclass(frozen=True)
class FaultLocation:
    """A single fault: a Pauli injected right after gate ``gate_index``.

    ``pauli`` is one letter for a one-qubit gate, two letters (first on the
    gate's first argument) for a two-qubit gate, and the word "flip" for
    preparations and measurements (the only fault those support: the wrong
    state, respectively the wrong recorded outcome).
    """

    gate_index: int
    pauli: str

    def __post_init__(self) -> None:
        if self.gate_index < 0:
            raise ValueError(f"negative gate index {self.gate_index}")
        if self.pauli == "flip":
            return
        if not (1 <= len(self.pauli) <= 2) or any(
            c not in "IXYZ" for c in self.pauli
        ):
            raise ValueError(f"bad fault pauli {self.pauli!r}")
        if set(self.pauli) == {"I"}:
            raise ValueError("fault pauli must be nontrivial")


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list over a fixed qubit roster.

    ``accept`` is the post-selection predicate: the run counts as accepted
    iff every listed label measured the listed value.  ``meta`` carries
    builder-specific annotations (error tables, notes); it is ignored by
    equality and dropped by serialization.
    """

    qubits: tuple[Qubit, ...]
    gates: tuple[Gate, ...]
    accept: tuple[tuple[str, int], ...] = ()
    meta: Mapping[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        roster: dict[str, Qubit] = {}
        for q in self.qubits:
            if q.id in roster:
                raise ValueError(f"duplicate qubit id {q.id!r}")
            roster[q.id] = q
        live = {q.id for q in self.qubits if q.role == "data"}
        labels: list[str] = []
        for i, g in enumerate(self.gates):
            for qid in g.args:
                if qid not in roster:
                    raise ValueError(f"gate {i} ({g.op}) uses undeclared qubit {qid!r}")
            if g.is_prep:
                live.add(g.args[0])
                continue
            for qid in g.args:
                if qid not in live:
                    raise ValueError(
                        f"gate {i} ({g.op}) uses qubit {qid!r} "
                        "before preparation or after measurement"
                    )
            if g.is_meas:
                live.discard(g.args[0])
                labels.append(g.label)  # type: ignore[arg-type]
        if len(labels) != len(set(labels)):
            dup = sorted({x for x in labels if labels.count(x) > 1})
            raise ValueError(f"duplicate measurement labels: {dup}")
        label_set = set(labels)
        for label, value in self.accept:
            if label not in label_set:
                raise ValueError(f"accept clause on unmeasured label {label!r}")
            if value not in (0, 1):
                raise ValueError(f"accept value for {label!r} must be 0 or 1")

    @property
    def labels(self) -> tuple[str, ...]:
        """Measurement labels in gate order."""
        return tuple(g.label for g in self.gates if g.is_meas)  # type: ignore[misc]

    def role_of(self, qubit_id: str) -> str:
        for q in self.qubits:
            if q.id == qubit_id:
                return q.role
        raise KeyError(qubit_id)

    def data_ids(self) -> tuple[str, ...]:
        """Data qubit ids in block-label order."""
        ids = [q.id for q in self.qubits if q.role == "data"]
        return tuple(sorted(ids, key=data_label))


class CircuitFormatError(ValueError):
    """Raised by deserialize for malformed text, with a position in the message."""


def serialize(circuit: Circuit) -> str:
    gates = []
    for g in circuit.gates:
        entry: dict[str, Any] = {"op": g.op, "args": list(g.args)}
        if g.label is not None:
            entry["label"] = g.label
        gates.append(entry)
    payload = {
        "qubits": [{"id": q.id, "role": q.role} for q in circuit.qubits],
        "gates": gates,
        "accept": [{"label": lab, "value": val} for lab, val in circuit.accept],
    }
    return json.dumps(payload, indent=2)


def _expect(obj: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in obj:
        raise CircuitFormatError(f"{where}: missing key {key!r}")
    return obj[key]


def _expect_list(obj: Any, key: str, where: str) -> list:
    value = _expect(obj, key, where) if isinstance(obj, Mapping) else None
    if not isinstance(value, list):
        raise CircuitFormatError(f"{where}.{key}: expected a list")
    return value


def deserialize(text: str) -> Circuit:
    """Parse the JSON circuit form; inverse of serialize.

    Raises CircuitFormatError naming the offending position (line/column for
    JSON syntax, "gates[i]" paths for schema problems).  Semantic problems
    (undeclared qubits, duplicate labels) surface as the same ValueErrors
    Circuit construction raises.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(payload, Mapping):
        raise CircuitFormatError("top level: expected an object")

    qubits = []
    for i, entry in enumerate(_expect_list(payload, "qubits", "top level")):
        where = f"qubits[{i}]"
        if not isinstance(entry, Mapping):
            raise CircuitFormatError(f"{where}: expected an object")
        qid = _expect(entry, "id", where)
        role = _expect(entry, "role", where)
        if role not in ROLES:
            raise CircuitFormatError(f"{where}: unknown role {role!r}")
        try:
            qubits.append(Qubit(str(qid), role))
        except ValueError as exc:
            raise CircuitFormatError(f"{where}: {exc}") from None

    gates = []
    for i, entry in enumerate(_expect_list(payload, "gates", "top level")):
        where = f"gates[{i}]"
        if not isinstance(entry, Mapping):
            raise CircuitFormatError(f"{where}: expected an object")
        op = _expect(entry, "op", where)
        if op not in ALL_OPS:
            raise CircuitFormatError(f"{where}: unknown op {op!r}")
        args = _expect(entry, "args", where)
        if not isinstance(args, list) or not all(isinstance(a, str) for a in args):
            raise CircuitFormatError(f"{where}.args: expected a list of qubit ids")
        label = entry.get("label")
        try:
            gates.append(Gate(op, tuple(args), label))
        except ValueError as exc:
            raise CircuitFormatError(f"{where}: {exc}") from None

    accept = []
    for i, entry in enumerate(_expect_list(payload, "accept", "top level")):
        where = f"accept[{i}]"
        if not isinstance(entry, Mapping):
            raise CircuitFormatError(f"{where}: expected an object")
        accept.append((_expect(entry, "label", where), _expect(entry, "value", where)))

    return Circuit(tuple(qubits), tuple(gates), tuple(accept))


def data_qubits(n: int) -> tuple[Qubit, ...]:
    """The standard roster entry for an n-qubit data block: d1..dn."""
    return tuple(Qubit(f"d{k}", "data") for k in range(1, n + 1))


def gate_sequence(*items: Gate | Iterable[Gate]) -> tuple[Gate, ...]:
    """Flatten gates and gate iterables into one tuple (builder convenience)."""
    out: list[Gate] = []
    for item in items:
        if isinstance(item, Gate):
            out.append(item)
        else:
            out.extend(item)
    return tuple(out)
