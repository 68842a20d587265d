"""Adaptive error-correction protocols over circuit segments.

A protocol here is a short program: run a segment, look at its outcome
flips, decide which segment comes next.  The interpreter threads the data
frame from segment to segment and asks a FaultSource what to inject into
each one, so the same code path serves noiseless runs, planned-fault
enumeration and Monte Carlo sampling.

Corrections come from two kinds of table.  The flag tables built by
build_flag_decoder_table hold the correlated errors a fault escaping a flag
window can leave, keyed by syndrome; everything else is decoded by
extended_correction, a total version of the weight-1 lookup that escalates
to higher weights when a syndrome has no weight-1 match (non-perfect codes
see such syndromes under multiple faults).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .builders import (
    flagged_extraction,
    measure_logicalX_513_segments,
    shor_cat_extraction,
    syk_half_cat_extraction,
    unflagged_extraction,
)
from .circuit import Circuit, FaultLocation
from .codes import FlagOrdering, StabilizerCode, check_flag_ordering, detection_code
from .pauli import PauliOperator, coset_min_weight, weight_le1_paulis
from .sim import FaultSet, NoiseModel, enumerate_single_faults, propagate, sample_faults


# ---------------------------------------------------------------------------
# Fault sources and the segment interpreter.


class FaultSource:
    """Decides what goes wrong in each executed segment.

    faults_for is consulted once per segment, in execution order, with the
    segment's circuit; error_before may return a Pauli to fold onto the data
    frame just before a segment runs (an error arriving between segments,
    which no gate fault can express).  The base class injects nothing.
    """

    def faults_for(self, step: int, circuit: Circuit) -> FaultSet:
        return ()

    def error_before(self, step: int) -> PauliOperator | None:
        return None


NO_FAULTS = FaultSource()


class PlannedFaults(FaultSource):
    """Faults pinned to absolute segment indices.

    The protocols run segments deterministically given the injected faults,
    so exhaustive harnesses can replay a branch by planning faults at the
    step numbers a previous run recorded.
    """

    def __init__(
        self,
        faults: Mapping[int, FaultSet] | None = None,
        errors: Mapping[int, PauliOperator] | None = None,
    ) -> None:
        self._faults = dict(faults or {})
        self._errors = dict(errors or {})

    def faults_for(self, step: int, circuit: Circuit) -> FaultSet:
        return self._faults.get(step, ())

    def error_before(self, step: int) -> PauliOperator | None:
        return self._errors.get(step)


class NoiseSampler(FaultSource):
    """Independent depolarizing faults drawn fresh for every segment."""

    def __init__(self, noise: NoiseModel, rng) -> None:
        self.noise = noise
        self.rng = rng

    def faults_for(self, step: int, circuit: Circuit) -> FaultSet:
        return sample_faults(circuit, self.noise, self.rng)


@dataclass(frozen=True)
class SegmentRecord:
    """One executed segment: its name, outcome bits and injected faults."""

    name: str
    outcomes: tuple[tuple[str, int], ...]
    faults: tuple[tuple[int, str], ...]


class _Interpreter:
    """Carries the data error and the transcript across segments."""

    def __init__(
        self, n: int, source: FaultSource, incoming: PauliOperator | None
    ) -> None:
        self.error = PauliOperator.identity(n) if incoming is None else incoming
        self.source = source
        self.step = 0
        self.records: list[SegmentRecord] = []

    def run(self, name: str, circuit: Circuit):
        extra = self.source.error_before(self.step)
        if extra is not None:
            self.error = self.error * extra
        faults = tuple(self.source.faults_for(self.step, circuit))
        frame = propagate(circuit, faults, incoming=self.error)
        self.error = frame.data_error
        self.records.append(
            SegmentRecord(
                name,
                tuple(frame.flips.items()),
                tuple((f.gate_index, f.pauli) for f in faults),
            )
        )
        self.step += 1
        return frame

    def transcript(self) -> tuple[SegmentRecord, ...]:
        return tuple(self.records)


def _records_json(records: Iterable[SegmentRecord]) -> list[dict]:
    return [
        {
            "name": r.name,
            "outcomes": {label: bit for label, bit in r.outcomes},
            "faults": [[idx, pauli] for idx, pauli in r.faults],
        }
        for r in records
    ]


# ---------------------------------------------------------------------------
# Decoding: the total minimum-weight table and the flag tables.


_EXTENDED_LUTS: dict[StabilizerCode, tuple[dict, list]] = {}


def extended_correction(
    code: StabilizerCode, syndrome: Sequence[int]
) -> PauliOperator:
    """Minimum-weight correction for an arbitrary syndrome.

    Matches min_weight_correction on syndromes with a weight-1 match (same
    tie-break: lowest qubit, then X before Y before Z) and keeps escalating
    the search weight otherwise, so it is total.  Results are cached per
    code and reused across calls.
    """
    key = tuple(syndrome)
    if len(key) != len(code.generators):
        raise ValueError(
            f"syndrome has {len(key)} bits, code has {len(code.generators)} generators"
        )
    lut, state = _EXTENDED_LUTS.setdefault(
        code, ({(0,) * len(code.generators): PauliOperator.identity(code.n)}, [0])
    )
    while key not in lut:
        state[0] += 1
        if state[0] > code.n:
            raise AssertionError("syndrome map exhausted without a match")
        for p in _weight_exactly(code.n, state[0]):
            lut.setdefault(code.syndrome_of(p), p)
    return lut[key]


def _weight_exactly(n: int, w: int) -> Iterable[PauliOperator]:
    from itertools import combinations, product

    for qubits in combinations(range(1, n + 1), w):
        for letters in product("XYZ", repeat=w):
            p = PauliOperator.identity(n)
            for q, letter in zip(qubits, letters):
                p = p * PauliOperator.single(n, q, letter)
            yield p


@dataclass(frozen=True)
class DecoderTable:
    """Syndrome-keyed corrections for one extraction context.

    key_indices names the generators whose syndrome bits form the key: all
    of them for a full table, only the opposite-type generators for the
    one-sector tables of CSS codes (a Z-type generator's flag table holds
    pure-Z corrections, which only X-type generators can see).
    """

    code: StabilizerCode
    generator: PauliOperator | None
    flagged: bool
    key_indices: tuple[int, ...]
    entries: Mapping[tuple[int, ...], PauliOperator]

    def key_of(self, syndrome: Sequence[int]) -> tuple[int, ...]:
        return tuple(syndrome[i] for i in self.key_indices)

    def lookup(self, syndrome: Sequence[int]) -> PauliOperator | None:
        return self.entries.get(self.key_of(syndrome))


def build_weight1_decoder_table(code: StabilizerCode) -> DecoderTable:
    """The plain table: every weight-1 error keyed by its syndrome."""
    entries: dict[tuple[int, ...], PauliOperator] = {}
    for p in weight_le1_paulis(code.n):
        entries.setdefault(code.syndrome_of(p), p)
    return DecoderTable(
        code, None, False, tuple(range(len(code.generators))),
        MappingProxyType(entries),
    )


def build_flag_decoder_table(
    code: StabilizerCode,
    gen: PauliOperator,
    ordering: FlagOrdering | Sequence[int],
) -> DecoderTable:
    """Corrections for the flag-raised branch of one generator's extraction.

    Every single fault of the flagged circuit that flips the flag leaves
    some data error; the first error seen for each syndrome key is stored
    verbatim, and later arrivals must agree with it modulo the stabilizer
    group (a disagreement would mean the coupling order cannot tell two
    different correlated errors apart, which the distinguishability check
    rules out up front).  For CSS codes only the component matching the
    generator's type is kept, keyed by the opposite type's syndrome bits.
    """
    if isinstance(ordering, FlagOrdering):
        fo = ordering
    else:
        fo = FlagOrdering(gen, tuple(ordering), css_mode=code.is_css)
    report = check_flag_ordering(code, fo)
    if not report.ok:
        raise ValueError(
            f"order {fo.order} cannot distinguish the flagged errors of {gen}: "
            f"{[tuple(str(e) for e in c) for c in report.collisions]}"
        )

    sector = ""
    if code.is_css:
        letters = {gen.letter(q) for q in gen.support()}
        if len(letters) != 1:
            raise ValueError(f"{gen} is not single-type on a CSS code")
        sector = letters.pop()
    if sector == "Z":
        key_indices = code.x_generator_indices()
    elif sector == "X":
        key_indices = code.z_generator_indices()
    else:
        key_indices = tuple(range(len(code.generators)))

    circ = flagged_extraction(fo)
    entries: dict[tuple[int, ...], PauliOperator] = {}
    for fault in enumerate_single_faults(circ):
        frame = propagate(circ, fault)
        if not frame.outcome("flag"):
            continue
        err = frame.data_error
        if sector == "Z":
            err = err.z_part()
        elif sector == "X":
            err = err.x_part()
        key = tuple(code.syndrome_of(err)[i] for i in key_indices)
        held = entries.get(key)
        if held is None:
            entries[key] = err
        elif code.canonical_rep(held) != code.canonical_rep(err):
            raise ValueError(
                f"flag table collision for {gen} at {key}: "
                f"{held} vs {err} are not equivalent"
            )
    return DecoderTable(code, gen, True, key_indices, MappingProxyType(entries))


def ideal_decode(code: StabilizerCode, error: PauliOperator) -> PauliOperator:
    """Noiseless decode: exact syndrome, minimum-weight correction.

    The returned residual is syndrome-free, so logical_effect applies; this
    is the oracle that defines logical failure for the harnesses.
    """
    return error * extended_correction(code, code.syndrome_of(error))


# ---------------------------------------------------------------------------
# The error-correction round.


@dataclass(frozen=True)
class ECRoundResult:
    """Outcome of one round: which branch fired and what was applied.

    branch is "no_event", "flag" or "syndrome" (first flag raised, or first
    nontrivial syndrome with the flag down), generator is the index that
    triggered, syndrome is the full re-extracted bit vector when the round
    re-extracted, and residual is the data error after the correction.
    """

    branch: str
    generator: int | None
    syndrome: tuple[int, ...] | None
    correction: PauliOperator
    residual: PauliOperator
    transcript: tuple[SegmentRecord, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "branch": self.branch,
                "generator": self.generator,
                "syndrome": list(self.syndrome) if self.syndrome else None,
                "correction": str(self.correction),
                "residual": str(self.residual),
                "segments": _records_json(self.transcript),
            }
        )


class ECRound:
    """One round of flag-based error correction for a distance-3 code.

    Generators are extracted one at a time with their flagged circuits, in
    the catalog order.  The first event stops the sweep: a raised flag means
    a possibly correlated error, decoded through that generator's flag
    table; a nontrivial syndrome with the flag down is re-measured before
    being trusted.  Either way all generators are then re-extracted without
    flags and a single correction is applied, ending the round.
    """

    kind = "ec"

    def __init__(
        self, code: StabilizerCode, orderings: Mapping[int, Sequence[int]]
    ) -> None:
        if set(orderings) != set(range(len(code.generators))):
            raise ValueError("need exactly one coupling order per generator")
        self.code = code
        self.orderings = {
            i: FlagOrdering(code.generators[i], tuple(orderings[i]), css_mode=code.is_css)
            for i in orderings
        }
        self.flagged = {i: flagged_extraction(fo) for i, fo in self.orderings.items()}
        self.unflagged = {
            i: unflagged_extraction(fo) for i, fo in self.orderings.items()
        }
        self.tables = {
            i: build_flag_decoder_table(code, fo.generator, fo)
            for i, fo in self.orderings.items()
        }

    def run(
        self,
        source: FaultSource = NO_FAULTS,
        incoming: PauliOperator | None = None,
    ) -> ECRoundResult:
        interp = _Interpreter(self.code.n, source, incoming)
        trigger: tuple[str, int] | None = None
        for i in range(len(self.code.generators)):
            frame = interp.run(f"flagged:g{i}", self.flagged[i])
            if frame.outcome("flag"):
                trigger = ("flag", i)
                break
            if frame.outcome("s"):
                trigger = ("syndrome", i)
                break
        if trigger is None:
            return ECRoundResult(
                "no_event", None, None, PauliOperator.identity(self.code.n),
                interp.error, interp.transcript(),
            )

        branch, gi = trigger
        syndrome = tuple(
            interp.run(f"unflagged:g{i}", self.unflagged[i]).outcome("s")
            for i in range(len(self.code.generators))
        )
        if branch == "flag":
            correction = self._flag_correction(gi, syndrome)
        else:
            correction = extended_correction(self.code, syndrome)
        interp.error = interp.error * correction
        return ECRoundResult(
            branch, gi, syndrome, correction, interp.error, interp.transcript()
        )

    def _flag_correction(
        self, gi: int, syndrome: tuple[int, ...]
    ) -> PauliOperator:
        hit = self.tables[gi].lookup(syndrome)
        if hit is None:
            # The fault hit a different element than the flag suggests;
            # treat the syndrome as an ordinary weight-<=1 event.
            return extended_correction(self.code, syndrome)
        # A one-sector hit leaves the opposite sector's bits to the plain
        # decoder; for full tables the leftover syndrome is already zero.
        rest = tuple(a ^ b for a, b in zip(syndrome, self.code.syndrome_of(hit)))
        return hit * extended_correction(self.code, rest)


def run_ec_round(
    code: StabilizerCode,
    orderings: Mapping[int, Sequence[int]],
    incoming: PauliOperator | None = None,
    source: FaultSource = NO_FAULTS,
) -> ECRoundResult:
    return ECRound(code, orderings).run(source, incoming)


class NaiveECRound:
    """Single unflagged pass with an immediate correction.

    The cautionary baseline: without flags or re-extraction, an ancilla
    fault mid-circuit deposits a correlated error the syndrome bits cannot
    see, and an error arriving mid-sweep splits the bits across two states,
    so the immediate correction can make things worse.
    """

    kind = "ec"

    def __init__(
        self, code: StabilizerCode, orderings: Mapping[int, Sequence[int]]
    ) -> None:
        self.code = code
        self.segments = tuple(
            unflagged_extraction(
                FlagOrdering(code.generators[i], tuple(orderings[i]),
                             css_mode=code.is_css)
            )
            for i in range(len(code.generators))
        )

    def run(
        self,
        source: FaultSource = NO_FAULTS,
        incoming: PauliOperator | None = None,
    ) -> ECRoundResult:
        interp = _Interpreter(self.code.n, source, incoming)
        syndrome = tuple(
            interp.run(f"unflagged:g{i}", seg).outcome("s")
            for i, seg in enumerate(self.segments)
        )
        correction = extended_correction(self.code, syndrome)
        interp.error = interp.error * correction
        branch = "syndrome" if any(syndrome) else "no_event"
        return ECRoundResult(
            branch, None, syndrome, correction, interp.error, interp.transcript()
        )


def run_naive_ec_round(
    code: StabilizerCode,
    orderings: Mapping[int, Sequence[int]],
    incoming: PauliOperator | None = None,
    source: FaultSource = NO_FAULTS,
) -> ECRoundResult:
    return NaiveECRound(code, orderings).run(source, incoming)


class ShorECRound:
    """One round of Shor-style correction with verified cat states.

    Each generator is measured transversally through a cat state whose
    preparation is checked before any coupling happens; a raised check
    means the run is rolled back and the cat prepared again, since the
    couplings are classically gated on the check.  The round keeps the
    flagged round's two-pass schedule (first nontrivial bit stops the
    sweep, then everything is re-measured and decoded once) so comparing
    the two methods compares the extraction circuits, not the schedule.
    """

    kind = "ec"

    def __init__(self, code: StabilizerCode, max_attempts: int = 32) -> None:
        self.code = code
        self.extractions = tuple(shor_cat_extraction(g) for g in code.generators)
        self.max_attempts = max_attempts

    def _measure(self, interp: _Interpreter, name: str, circuit: Circuit) -> int:
        for _ in range(self.max_attempts):
            before = interp.error
            frame = interp.run(name, circuit)
            if not frame.outcome("verify"):
                bit = 0
                for label in circuit.meta["syndrome_labels"]:
                    bit ^= frame.outcome(label)
                return bit
            interp.error = before
        raise RuntimeError(f"cat verification kept failing in segment {name}")

    def run(
        self,
        source: FaultSource = NO_FAULTS,
        incoming: PauliOperator | None = None,
    ) -> ECRoundResult:
        interp = _Interpreter(self.code.n, source, incoming)
        trigger: int | None = None
        for i, circ in enumerate(self.extractions):
            if self._measure(interp, f"cat:g{i}", circ):
                trigger = i
                break
        if trigger is None:
            return ECRoundResult(
                "no_event", None, None, PauliOperator.identity(self.code.n),
                interp.error, interp.transcript(),
            )
        syndrome = tuple(
            self._measure(interp, f"again:g{i}", circ)
            for i, circ in enumerate(self.extractions)
        )
        correction = extended_correction(self.code, syndrome)
        interp.error = interp.error * correction
        return ECRoundResult(
            "syndrome", trigger, syndrome, correction, interp.error,
            interp.transcript(),
        )


# ---------------------------------------------------------------------------
# The [[n, n-2, 2]] detection round.


@dataclass(frozen=True)
class DetectionResult:
    detected: bool
    residual: PauliOperator
    transcript: tuple[SegmentRecord, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "detected": self.detected,
                "residual": str(self.residual),
                "segments": _records_json(self.transcript),
            }
        )


class DetectionRound:
    """Flagged extraction of X..X then Z..Z for the [[n, n-2, 2]] code.

    The code only detects, so there is nothing to correct: the round just
    reports whether any flag or syndrome bit fired.
    """

    kind = "detect"

    def __init__(self, n: int) -> None:
        self.code = detection_code(n)
        order = tuple(range(1, n + 1))
        self.segments = tuple(
            flagged_extraction(FlagOrdering(gen, order, css_mode=True))
            for gen in self.code.generators
        )

    def run(
        self,
        source: FaultSource = NO_FAULTS,
        incoming: PauliOperator | None = None,
    ) -> DetectionResult:
        interp = _Interpreter(self.code.n, source, incoming)
        detected = False
        for i, seg in enumerate(self.segments):
            frame = interp.run(f"flagged:g{i}", seg)
            if frame.outcome("flag") or frame.outcome("s"):
                detected = True
        return DetectionResult(detected, interp.error, interp.transcript())


class UnflaggedDetectionRound:
    """Detection without flags; exists as the baseline the flags fix.

    An ancilla fault midway through the X..X extraction deposits an X on
    every remaining qubit, which for even block sizes can be an undetected
    logical operator, so this round is not fault tolerant.
    """

    kind = "detect"

    def __init__(self, n: int) -> None:
        self.code = detection_code(n)
        order = tuple(range(1, n + 1))
        self.segments = tuple(
            unflagged_extraction(FlagOrdering(gen, order, css_mode=True))
            for gen in self.code.generators
        )

    def run(
        self,
        source: FaultSource = NO_FAULTS,
        incoming: PauliOperator | None = None,
    ) -> DetectionResult:
        interp = _Interpreter(self.code.n, source, incoming)
        detected = False
        for i, seg in enumerate(self.segments):
            if interp.run(f"unflagged:g{i}", seg).outcome("s"):
                detected = True
        return DetectionResult(detected, interp.error, interp.transcript())


def run_detection_round(
    n: int,
    incoming: PauliOperator | None = None,
    source: FaultSource = NO_FAULTS,
) -> DetectionResult:
    return DetectionRound(n).run(source, incoming)


# ---------------------------------------------------------------------------
# Destructive logical-X measurement for the five-qubit code.


@dataclass(frozen=True)
class MeasXResult:
    outcome: int
    branch: str
    residual: PauliOperator
    transcript: tuple[SegmentRecord, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "outcome": self.outcome,
                "branch": self.branch,
                "residual": str(self.residual),
                "segments": _records_json(self.transcript),
            }
        )


class LogicalXMeasurement513:
    """Measure logical X by three flagged weight-3 checks plus a fallback.

    The checks all measure representatives of the same logical operator, so
    on the clean path their bits must agree; three agreeing readings decide
    the outcome.  A flag raised mid-check ends the checking early (with at
    most one fault the readings taken before it stand), and a disagreement
    falls back to the destructive finale: unentangle the block, measure
    every qubit in X, and correct the parity with a table keyed by the four
    readout parities, built for whichever error set the interrupted branch
    admits.
    """

    kind = "meas"
    n = 5

    def __init__(self) -> None:
        segments = measure_logicalX_513_segments()
        self.checks = segments[:3]
        self.finale = segments[3]
        flag1_errors = [
            PauliOperator.from_string(s)
            for s in self.checks[0].meta["flagged_candidates"]
        ]
        self.flag1_table = self._decode_table(flag1_errors)
        self.any_table = self._decode_table(weight_le1_paulis(5))

    def _decode_table(
        self, errors: Iterable[PauliOperator]
    ) -> dict[tuple[int, ...], int]:
        """Map each candidate's readout parities to its parity-bit damage."""
        table: dict[tuple[int, ...], int] = {}
        for err in errors:
            pattern, raw = self._finale_readout(propagate(self.finale, (), incoming=err))
            if table.setdefault(pattern, raw) != raw:
                raise ValueError(f"parity pattern {pattern} is ambiguous")
        return table

    @staticmethod
    def _finale_readout(frame) -> tuple[tuple[int, ...], int]:
        m = [frame.outcome(f"m{q}") for q in range(1, 6)]
        pattern = (m[0] ^ m[3], m[1] ^ m[4], m[0] ^ m[2], m[1] ^ m[3])
        raw = m[0] ^ m[1] ^ m[2] ^ m[3] ^ m[4]
        return pattern, raw

    def run(
        self,
        source: FaultSource = NO_FAULTS,
        incoming: PauliOperator | None = None,
    ) -> MeasXResult:
        interp = _Interpreter(5, source, incoming)
        first = interp.run("check1", self.checks[0])
        if first.outcome("flag"):
            return self._finale_result(interp, "flag1", self.flag1_table)
        s1 = first.outcome("s")

        second = interp.run("check2", self.checks[1])
        if second.outcome("flag"):
            return MeasXResult(s1, "flag2", interp.error, interp.transcript())
        s2 = second.outcome("s")
        if s2 != s1:
            return self._finale_result(interp, "disagree", self.any_table)

        third = interp.run("check3", self.checks[2])
        if third.outcome("flag"):
            return MeasXResult(s1, "flag3", interp.error, interp.transcript())
        if third.outcome("s") == s1:
            return MeasXResult(s1, "agree", interp.error, interp.transcript())
        # two readings say one thing, the third another: someone faulted, so
        # the data may carry a weight-1 error; the readout decode settles it
        return self._finale_result(interp, "tiebreak", self.any_table)

    def _finale_result(
        self, interp: _Interpreter, branch: str, table: dict[tuple[int, ...], int]
    ) -> MeasXResult:
        frame = interp.run("decode", self.finale)
        pattern, raw = self._finale_readout(frame)
        flip = table.get(pattern)
        if flip is None:
            flip = self.any_table.get(pattern, 0)
        return MeasXResult(
            raw ^ flip, branch, interp.error, interp.transcript()
        )


def run_logicalX_measurement_513(
    incoming: PauliOperator | None = None,
    source: FaultSource = NO_FAULTS,
) -> MeasXResult:
    return LogicalXMeasurement513().run(source, incoming)


# ---------------------------------------------------------------------------
# Half-cat extraction with pattern-keyed corrections.


def syk_equivalence_group(
    code: StabilizerCode, gen: PauliOperator
) -> tuple[PauliOperator, ...]:
    """Generators of the group a post-extraction residual is judged modulo.

    Measuring gen makes it a stabilizer of the output state, so when the
    measured operator lives in the code's normalizer without being a
    stabilizer element already (a logical observable, as in the fermion
    encodings), depositing it whole is harmless and the group grows by one.
    """
    if code.in_stabilizer_group(gen):
        return code.generators
    return code.generators + (gen,)


def syk_correction_table(
    code: StabilizerCode, gen: PauliOperator
) -> dict[tuple[int, ...], PauliOperator]:
    """Corrections keyed by the leaf readout pattern of the half-cat circuit.

    Each single fault leaves some data error and some pattern on the leaf Z
    measurements.  For every pattern this picks one Pauli that brings every
    error seen with it down to weight <= 1 modulo the equivalence group
    (identity preferred, so harmless patterns stay out of the table), and
    fails loudly if no single choice serves them all.
    """
    circ = syk_half_cat_extraction(gen)
    labels = circ.meta["pattern_labels"]
    equiv = syk_equivalence_group(code, gen)
    seen: dict[tuple[int, ...], list[PauliOperator]] = {}
    for fault in enumerate_single_faults(circ):
        frame = propagate(circ, fault)
        pattern = tuple(frame.outcome(label) for label in labels)
        seen.setdefault(pattern, []).append(frame.data_error)

    table: dict[tuple[int, ...], PauliOperator] = {}
    for pattern in sorted(seen):
        errors = seen[pattern]
        candidates = [PauliOperator.identity(code.n)]
        candidates += sorted(set(errors), key=lambda p: (p.weight(), str(p)))
        for cand in candidates:
            if all(coset_min_weight(e * cand, equiv) <= 1 for e in errors):
                if not cand.is_identity():
                    table[pattern] = cand
                break
        else:
            raise ValueError(f"no single correction serves pattern {pattern}")
    return table


@dataclass(frozen=True)
class SykResult:
    syndrome: int
    pattern: tuple[int, ...]
    correction: PauliOperator
    residual: PauliOperator
    transcript: tuple[SegmentRecord, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "syndrome": self.syndrome,
                "pattern": list(self.pattern),
                "correction": str(self.correction),
                "residual": str(self.residual),
                "segments": _records_json(self.transcript),
            }
        )


class SykExtraction:
    """One half-cat syndrome extraction followed by its pattern correction."""

    kind = "syk"

    def __init__(self, code: StabilizerCode, gen: PauliOperator) -> None:
        self.code = code
        self.generator = gen
        self.circuit = syk_half_cat_extraction(gen)
        self.pattern_labels = self.circuit.meta["pattern_labels"]
        self.table = syk_correction_table(code, gen)
        # Index of the first gate after the data couplings (the second star
        # half and the measurements); faults from here on cannot have
        # touched the data, which the verification harness checks against
        # the patterns that would trigger a multi-qubit correction.
        data_ids = set(self.circuit.data_ids())
        self.post_coupling_start = 1 + max(
            i
            for i, g in enumerate(self.circuit.gates)
            if any(a in data_ids for a in g.args)
        )

    def run(
        self,
        source: FaultSource = NO_FAULTS,
        incoming: PauliOperator | None = None,
    ) -> SykResult:
        interp = _Interpreter(self.code.n, source, incoming)
        frame = interp.run("extract", self.circuit)
        pattern = tuple(frame.outcome(label) for label in self.pattern_labels)
        correction = self.table.get(pattern, PauliOperator.identity(self.code.n))
        interp.error = interp.error * correction
        return SykResult(
            frame.outcome("syndrome"), pattern, correction,
            interp.error, interp.transcript(),
        )
