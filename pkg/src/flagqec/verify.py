"""Exhaustive fault-tolerance verification and malignant-pair counting.

A distance-3 protocol earns its keep by a universally quantified claim:
under at most one faulty location, the output is still good.  This module
checks such claims by brute force.  Because a fault can change which
segments a protocol executes, the harness drives the protocol interpreter
itself rather than a flattened circuit: it first records the fault-free
segment sequence, then replays the protocol once per (segment, fault)
choice.  Segments only reachable after a first fault never need faults of
their own under the single-fault hypothesis, so this enumeration is
branch-complete.

Pair counting extends the same replay to two faults and turns the malignant
set into the leading-order coefficient of the logical error rate, the
number Monte Carlo sweeps are compared against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import gf2poly
from .circuit import Circuit, FaultLocation
from .codes import StabilizerCode, check_flag_ordering, claim1_ordering, hamming_code
from .pauli import PauliOperator, coset_min_weight, weight_le1_paulis
from .protocol import (
    NO_FAULTS,
    FaultSource,
    PlannedFaults,
    SykExtraction,
    ideal_decode,
    syk_equivalence_group,
)
from .sim import NoiseModel, enumerate_single_faults, fault_rate, fault_weight, propagate

_UNIT_NOISE = NoiseModel.uniform(1.0)


@dataclass(frozen=True)
class Failure:
    """One fault assignment that broke the protocol's promise."""

    faults: tuple[tuple[int, FaultLocation], ...]
    residual: str
    classification: str

    def as_dict(self) -> dict:
        return {
            "faults": [
                {"segment": step, "gate": loc.gate_index, "pauli": loc.pauli}
                for step, loc in self.faults
            ],
            "residual": self.residual,
            "classification": self.classification,
        }


@dataclass(frozen=True)
class FTReport:
    subject: str
    locations: int
    failures: tuple[Failure, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return json.dumps(
            {
                "subject": self.subject,
                "locations": self.locations,
                "passed": self.passed,
                "failures": [f.as_dict() for f in self.failures],
            }
        )

    def summary(self) -> str:
        lines = [
            f"{self.subject}: {'PASS' if self.passed else 'FAIL'} "
            f"({self.locations} locations, {len(self.failures)} failures)"
        ]
        for f in self.failures[:20]:
            where = ", ".join(
                f"segment {step} gate {loc.gate_index} {loc.pauli}"
                for step, loc in f.faults
            )
            lines.append(f"  {f.classification}: {where} -> {f.residual}")
        if len(self.failures) > 20:
            lines.append(f"  ... and {len(self.failures) - 20} more")
        return "\n".join(lines)


@dataclass(frozen=True)
class PairCount:
    """Exhaustive two-fault accounting for one protocol.

    total_pairs counts unordered pairs of distinct fault locations over the
    executed segments; malignant_pairs counts those location pairs with
    at least one Pauli assignment causing a logical failure; coefficient is
    the sum of probability weights of all malignant assignments at unit p,
    so the logical rate is coefficient * p^2 to leading order.
    """

    subject: str
    total_pairs: int
    malignant_pairs: int
    coefficient: float
    runs: int
    estimate: bool = False

    def to_json(self) -> str:
        return json.dumps(
            {
                "subject": self.subject,
                "total_pairs": self.total_pairs,
                "malignant_pairs": self.malignant_pairs,
                "coefficient": self.coefficient,
                "runs": self.runs,
                "estimate": self.estimate,
            }
        )


class _Recorder(FaultSource):
    """Wraps a fault plan and remembers which segments actually ran."""

    def __init__(self, inner: FaultSource = NO_FAULTS) -> None:
        self.inner = inner
        self.seen: list[tuple[int, Circuit]] = []

    def faults_for(self, step: int, circuit: Circuit):
        self.seen.append((step, circuit))
        return self.inner.faults_for(step, circuit)

    def error_before(self, step: int):
        return self.inner.error_before(step)


def _trace(protocol, inner: FaultSource = NO_FAULTS):
    rec = _Recorder(inner)
    result = protocol.run(source=rec)
    return result, rec.seen


def _ec_failure(protocol, result) -> str | None:
    decoded = ideal_decode(protocol.code, result.residual)
    if protocol.code.logical_effect(decoded) == "logical":
        return "logical_after_decode"
    return None


def _detect_failure(protocol, result) -> str | None:
    if result.detected:
        return None
    code = protocol.code
    if any(code.syndrome_of(result.residual)):
        return None  # visible to the next round, hence harmless
    if code.logical_effect(result.residual) == "logical":
        return "undetected_logical"
    return None


def _meas_failure(protocol, result) -> str | None:
    if result.outcome != 0:
        return f"wrong_outcome_{result.branch}"
    return None


_CHECKERS: Mapping[str, Callable] = {
    "ec": _ec_failure,
    "detect": _detect_failure,
    "meas": _meas_failure,
}


def _input_failures(protocol) -> list[Failure]:
    """The zero-fault half of the FT promise: weight-1 inputs come out clean."""
    out = []
    n = protocol.code.n if hasattr(protocol, "code") else protocol.n
    for err in weight_le1_paulis(n)[1:]:
        result = protocol.run(incoming=err)
        kind = protocol.kind
        if kind == "ec":
            code = protocol.code
            bad = any(code.syndrome_of(result.residual)) \
                or code.logical_effect(result.residual) == "logical"
        elif kind == "detect":
            bad = not result.detected
        else:
            bad = result.outcome != 0
        if bad:
            out.append(Failure((), f"input {err}", "weight1_input"))
    return out


def verify_single_fault_ft(protocol) -> FTReport:
    """Check the single-fault promise over every reachable fault location.

    The protocol must be one of the registered kinds (an EC round, a
    detection round, or a measurement procedure); each exposes run(source,
    incoming) and a result the kind's checker knows how to judge.
    """
    checker = _CHECKERS.get(getattr(protocol, "kind", None))
    if checker is None:
        raise ValueError(f"unregistered protocol kind {getattr(protocol, 'kind', None)!r}")

    failures = list(_input_failures(protocol))
    _, segments = _trace(protocol)
    locations = 0
    for step, circ in segments:
        locations += len(circ.gates)
        for fault in enumerate_single_faults(circ):
            result = protocol.run(source=PlannedFaults({step: fault}))
            why = checker(protocol, result)
            if why is not None:
                residual = getattr(result, "residual", None)
                failures.append(
                    Failure(((step, fault[0]),), str(residual), why)
                )
    failures.sort(key=lambda f: tuple((s, l.gate_index, l.pauli) for s, l in f.faults))
    return FTReport(_subject(protocol), locations, tuple(failures))


def _subject(protocol) -> str:
    code = getattr(protocol, "code", None)
    name = type(protocol).__name__
    return f"{code.name} {name}" if code is not None else name


def verify_prep_ft(
    circuit: Circuit,
    code: StabilizerCode,
    logicals: Sequence[PauliOperator] = (),
    css_separate: bool | None = None,
    allow_detected: bool | None = None,
) -> FTReport:
    """Check a postselected preparation circuit.

    The target state's stabilizer group is the code's generators plus the
    fixed logical operators.  Every single fault whose run the acceptance
    predicate keeps must leave a residual of weight <= 1 modulo that group.
    In CSS-separate mode the X part and Z part are judged each against
    their own sector, the right notion when later correction handles the
    sectors independently.  For detection codes (distance 2) a residual
    with nonzero syndrome is also tolerated: every round of the detection
    architecture postselects, so the next round throws such a state away,
    and only an undetectable logical residual actually breaks the promise.
    """
    if not circuit.accept:
        raise ValueError("preparation circuit has no acceptance predicate")
    if css_separate is None:
        css_separate = bool(circuit.meta.get("css_separate", False))
    if allow_detected is None:
        allow_detected = code.d == 2
    gens = list(code.generators) + list(logicals)
    if css_separate:
        x_gens = [g for g in gens if not g.z]
        z_gens = [g for g in gens if not g.x]
        if len(x_gens) + len(z_gens) != len(gens):
            raise ValueError("CSS-separate mode needs single-type stabilizers")

    failures = []
    for fault in enumerate_single_faults(circuit):
        frame = propagate(circuit, fault)
        if any(frame.outcome(lbl) != val for lbl, val in circuit.accept):
            continue
        err = frame.data_error
        if css_separate:
            ok = (
                coset_min_weight(err.x_part(), x_gens) <= 1
                and coset_min_weight(err.z_part(), z_gens) <= 1
            )
        else:
            ok = coset_min_weight(err, gens) <= 1
        if not ok and allow_detected and any(code.syndrome_of(err)):
            ok = True
        if not ok:
            failures.append(Failure(((0, fault[0]),), str(err), "accepted_heavy_residual"))
    failures.sort(key=lambda f: tuple((s, l.gate_index, l.pauli) for s, l in f.faults))
    return FTReport(f"prep {code.name}", len(circuit.gates), tuple(failures))


def verify_syk_extraction(gen: PauliOperator, code: StabilizerCode) -> FTReport:
    """Check the half-cat extraction plus its pattern-keyed corrections.

    Two properties: every single fault, after the correction its readout
    pattern selects, leaves residual weight <= 1 modulo the equivalence
    group (the stabilizer group, grown by the measured operator when that
    is a logical observable rather than a stabilizer element); and no
    single fault at or past the end of the data couplings can produce a
    pattern whose correction touches two or more qubits (those patterns are
    reserved for mid-coupling cat-state failures, and a late fault reaching
    them would get "corrected" into a fresh weight-2 error).
    """
    syk = SykExtraction(code, gen)
    equiv = syk_equivalence_group(code, gen)
    heavy = {p for p, c in syk.table.items() if c.weight() >= 2}
    failures = []
    for fault in enumerate_single_faults(syk.circuit):
        frame = propagate(syk.circuit, fault)
        pattern = tuple(frame.outcome(lbl) for lbl in syk.pattern_labels)
        corrected = frame.data_error * syk.table.get(
            pattern, PauliOperator.identity(code.n)
        )
        loc = fault[0]
        if coset_min_weight(corrected, equiv) > 1:
            failures.append(Failure(((0, loc),), str(corrected), "heavy_residual"))
        if loc.gate_index >= syk.post_coupling_start and pattern in heavy:
            failures.append(
                Failure(((0, loc),), "".join(map(str, pattern)), "late_heavy_pattern")
            )
    failures.sort(key=lambda f: tuple((s, l.gate_index, l.pauli) for s, l in f.faults))
    return FTReport(
        f"syk w={len(gen.support())} on {code.name}",
        len(syk.circuit.gates),
        tuple(failures),
    )


def _assignment_weight(loc: FaultLocation, circ: Circuit) -> float:
    gate = circ.gates[loc.gate_index]
    return fault_rate(gate, _UNIT_NOISE) * fault_weight(loc.pauli, gate)


def count_malignant_pairs(protocol, budget: int = 3_000_000, seed: int = 0) -> PairCount:
    """Count fault pairs that beat the protocol and their rate coefficient.

    Enumerates unordered pairs of distinct fault locations (the second
    location drawn from the segments the first-faulted run actually
    executes, so branch changes are honored), tries every Pauli assignment,
    and sums the assignment weights of the malignant ones at unit p.  When
    the assignment space exceeds the budget, a seeded uniform sample of
    that size is run instead and the result is scaled up and flagged as an
    estimate.
    """
    single = verify_single_fault_ft(protocol)
    if not single.passed:
        raise ValueError(f"{single.subject} fails single-fault FT; pairs are moot")
    checker = _CHECKERS[protocol.kind]

    _, base = _trace(protocol)
    firsts: list[tuple[int, Circuit, FaultLocation]] = []
    for step, circ in base:
        for fault in enumerate_single_faults(circ):
            firsts.append((step, circ, fault[0]))

    # Materialize the second-fault spaces once per first fault.
    runs = 0
    spaces: list[tuple[int, FaultLocation, float, list]] = []
    total_assignments = 0
    pair_keys: set[tuple] = set()
    for k1, circ1, f1 in firsts:
        _, segs = _trace(protocol, PlannedFaults({k1: (f1,)}))
        runs += 1
        w1 = _assignment_weight(f1, circ1)
        seconds = []
        for k2, circ2 in segs:
            if k2 < k1:
                continue
            for fault in enumerate_single_faults(circ2):
                f2 = fault[0]
                if k2 == k1 and f2.gate_index <= f1.gate_index:
                    continue
                seconds.append((k2, circ2, f2))
                pair_keys.add(((k1, f1.gate_index), (k2, f2.gate_index)))
        spaces.append((k1, f1, w1, seconds))
        total_assignments += len(seconds)

    rng = np.random.default_rng(seed)
    estimate = total_assignments > budget
    if estimate:
        keep = rng.random(total_assignments)

    coefficient = 0.0
    malignant: set[tuple] = set()
    index = 0
    scale = min(1.0, budget / max(total_assignments, 1))
    for k1, f1, w1, seconds in spaces:
        for k2, circ2, f2 in seconds:
            chosen = (not estimate) or keep[index] < scale
            index += 1
            if not chosen:
                continue
            plan = (
                PlannedFaults({k1: (f1, f2)})
                if k2 == k1
                else PlannedFaults({k1: (f1,), k2: (f2,)})
            )
            result = protocol.run(source=plan)
            runs += 1
            if checker(protocol, result) is not None:
                coefficient += w1 * _assignment_weight(f2, circ2)
                malignant.add(((k1, f1.gate_index), (k2, f2.gate_index)))
    if estimate:
        coefficient /= scale

    return PairCount(
        subject=_subject(protocol),
        total_pairs=len(pair_keys),
        malignant_pairs=len(malignant),
        coefficient=coefficient,
        runs=runs,
        estimate=estimate,
    )


def claim1_sweep(r_values: Iterable[int] = range(3, 11)) -> FTReport:
    """Check the polynomial coupling orders for every Hamming code size.

    For each r and every primitive polynomial of degree r-1, the derived
    order for the top Z row must make all flagged suffix errors syndrome
    distinct.  Exhaustive in both r and the polynomial choice.
    """
    failures = []
    checked = 0
    for r in r_values:
        code = hamming_code(r)
        for p in gf2poly.primitive_polys(r - 1):
            checked += 1
            fo = claim1_ordering(r, p)
            report = check_flag_ordering(code, fo)
            if not report.ok:
                failures.append(
                    Failure((), f"r={r} p={gf2poly.poly_text(p)}", "claim1_collision")
                )
    return FTReport("claim1 sweep", checked, tuple(failures))
