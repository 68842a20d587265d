"""Circuit builders: every extraction, preparation, and measurement circuit.

All builders are pure and return immutable Circuits.  Common conventions:

  - data qubits d1..dn carry the code block; couplings normally put the
    data on the control side, so syndrome ancillas are PrepZ/MeasZ and
    flags PrepX/MeasX (the shared-flag circuit reverses this: its ancillas
    drive the data so that mid-round Z errors register on the readout);
  - a weight-w generator couples through w couple_P gates, one per support
    qubit, P the generator's letter there;
  - flagged circuits place the first flag CNOT immediately after the first
    coupling and the second immediately before the last coupling, so faults
    on the outermost couplings cannot hide a correlated error;
  - post-selection is recorded in ``accept``; outcome logic beyond accept/
    reject (decode tables, repetition votes) lives in protocol.py.

Several builders stamp ``meta`` with small derived tables (flag error sets,
localization maps) so that inspection tools need no extra context.  meta is
informational: equality and serialization ignore it.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .circuit import Circuit, Gate, Qubit, data_qubits, gate_sequence
from .codes import FlagOrdering, flagged_error_candidates, hamming_code
from .pauli import PauliOperator

_COUPLE_OP = {"X": "couple_x", "Y": "couple_y", "Z": "couple_z"}


def _couple(gen: PauliOperator, qubit: int, anc: str) -> Gate:
    return Gate(_COUPLE_OP[gen.letter(qubit)], (f"d{qubit}", anc))


def natural_ordering(gen: PauliOperator, css_mode: bool = False) -> FlagOrdering:
    """The ordering that couples a generator's support in label order."""
    return FlagOrdering(gen, tuple(sorted(gen.support())), css_mode)


def unflagged_extraction(ordering: FlagOrdering) -> Circuit:
    """One syndrome ancilla, no flag: PrepZ, couplings in order, MeasZ "s"."""
    gen = ordering.generator
    gates = gate_sequence(
        Gate("prep_z", ("a1",)),
        (_couple(gen, q, "a1") for q in ordering.order),
        Gate("meas_z", ("a1",), "s"),
    )
    qubits = data_qubits(gen.n) + (Qubit("a1", "syndrome"),)
    return Circuit(qubits, gates, meta={"generator": str(gen)})


def _flagged_gates(
    gen: PauliOperator,
    order: Sequence[int],
    anc: str,
    flag: str,
    s_label: str,
    flag_label: str,
) -> list[Gate]:
    gates = [Gate("prep_z", (anc,)), Gate("prep_x", (flag,))]
    gates.append(_couple(gen, order[0], anc))
    gates.append(Gate("cnot", (flag, anc)))
    for q in order[1:-1]:
        gates.append(_couple(gen, q, anc))
    gates.append(Gate("cnot", (flag, anc)))
    gates.append(_couple(gen, order[-1], anc))
    gates.append(Gate("meas_x", (flag,), flag_label))
    gates.append(Gate("meas_z", (anc,), s_label))
    return gates


def flagged_extraction(ordering: FlagOrdering) -> Circuit:
    """Syndrome ancilla plus one flag qubit whose CNOT window covers every
    coupling except the first and last."""
    gen = ordering.generator
    if len(ordering.order) < 3:
        raise ValueError(
            f"flagged extraction needs support of at least 3, got {len(ordering.order)}"
        )
    gates = tuple(_flagged_gates(gen, ordering.order, "a1", "f1", "s", "flag"))
    qubits = data_qubits(gen.n) + (Qubit("a1", "syndrome"), Qubit("f1", "flag"))
    meta = {
        "generator": str(gen),
        "order": tuple(ordering.order),
        "flagged_candidates": tuple(str(p) for p in flagged_error_candidates(ordering)),
    }
    return Circuit(qubits, gates, meta=meta)


def shor_cat_extraction(gen: PauliOperator) -> Circuit:
    """Verified cat state coupled transversally; syndrome is the parity of
    the X measurements m1..mw, valid only when "verify" returns 0."""
    support = sorted(gen.support())
    w = len(support)
    if w < 2:
        raise ValueError(f"cat extraction needs weight >= 2, got {w}")
    letters = [gen.letter(q) for q in support]
    if "Y" in letters:
        raise ValueError("cat coupling for Y components is not implemented")
    cat = [f"c{i}" for i in range(1, w + 1)]
    gates = [Gate("prep_x", (cat[0],))]
    gates += [Gate("prep_z", (c,)) for c in cat[1:]]
    gates += [Gate("cnot", (cat[i], cat[i + 1])) for i in range(w - 1)]
    gates += [
        Gate("prep_z", ("v1",)),
        Gate("cnot", (cat[0], "v1")),
        Gate("cnot", (cat[-1], "v1")),
        Gate("meas_z", ("v1",), "verify"),
    ]
    for c, q, letter in zip(cat, support, letters):
        if letter == "X":
            gates.append(Gate("cnot", (c, f"d{q}")))
        else:
            gates.append(Gate("cz", (c, f"d{q}")))
    gates += [Gate("meas_x", (c,), f"m{i}") for i, c in enumerate(cat, 1)]
    qubits = (
        data_qubits(gen.n)
        + tuple(Qubit(c, "cat") for c in cat)
        + (Qubit("v1", "syndrome"),)
    )
    meta = {
        "generator": str(gen),
        "syndrome_labels": tuple(f"m{i}" for i in range(1, w + 1)),
    }
    return Circuit(qubits, tuple(gates), (("verify", 0),), meta=meta)


def syk_half_cat_extraction(gen: PauliOperator) -> Circuit:
    """Unverified cat on max(3, ceil(w/2)) ancillas, two data qubits coupled
    per ancilla, then the cat is decoded: the center's X measurement is the
    syndrome and the leaves' Z measurements key the correction table."""
    support = sorted(gen.support())
    w = len(support)
    if w < 4 or w % 2:
        raise ValueError(f"half-cat extraction needs even weight >= 4, got {w}")
    letters = {q: gen.letter(q) for q in support}
    if "Y" in letters.values():
        raise ValueError("cat coupling for Y components is not implemented")
    m = max(3, math.ceil(w / 2))
    leaves = [f"a{i}" for i in range(1, m)]
    center = f"a{m}"
    pairs = [tuple(support[2 * i : 2 * i + 2]) for i in range(w // 2)]
    assignment = dict(zip(leaves, pairs))
    if len(pairs) == m:
        assignment[center] = pairs[-1]

    def couple(anc: str, q: int) -> Gate:
        if letters[q] == "X":
            return Gate("cnot", (anc, f"d{q}"))
        return Gate("cz", (anc, f"d{q}"))

    star = [Gate("cnot", (center, leaf)) for leaf in leaves]
    gates = [Gate("prep_x", (center,))]
    gates += [Gate("prep_z", (leaf,)) for leaf in leaves]
    gates += star
    for anc in leaves + ([center] if center in assignment else []):
        for q in assignment.get(anc, ()):
            gates.append(couple(anc, q))
    gates += star
    gates.append(Gate("meas_x", (center,), "syndrome"))
    gates += [Gate("meas_z", (leaf,), f"z{i}") for i, leaf in enumerate(leaves, 1)]
    qubits = data_qubits(gen.n) + tuple(
        Qubit(a, "cat") for a in leaves + [center]
    )
    meta = {
        "generator": str(gen),
        "pattern_labels": tuple(f"z{i}" for i in range(1, m)),
        "pairs": {anc: assignment.get(anc, ()) for anc in leaves + [center]},
    }
    return Circuit(qubits, tuple(gates), meta=meta)


def overlapping_flag_extraction(gen: PauliOperator) -> Circuit:
    """One flag per coupling, windows overlapping so that every interval on
    the syndrome wire is covered; localizes ancilla Z faults per flag."""
    if gen.x:
        raise ValueError("overlapping-flag extraction is built for Z generators")
    support = sorted(gen.support())
    w = len(support)
    if w < 2:
        raise ValueError(f"need weight >= 2, got {w}")
    flags = [f"f{i}" for i in range(1, w + 1)]
    gates = [Gate("prep_z", ("a1",))]
    gates += [Gate("prep_x", (f,)) for f in flags]
    gates += [Gate("cnot", (flags[0], "a1")), _couple(gen, support[0], "a1")]
    for i in range(1, w):
        gates += [
            Gate("cnot", (flags[i], "a1")),
            Gate("cnot", (flags[i - 1], "a1")),
            _couple(gen, support[i], "a1"),
        ]
    gates.append(Gate("cnot", (flags[-1], "a1")))
    gates += [Gate("meas_x", (f,), f"flag{i}") for i, f in enumerate(flags, 1)]
    gates.append(Gate("meas_z", ("a1",), "s"))
    qubits = (
        data_qubits(gen.n)
        + (Qubit("a1", "syndrome"),)
        + tuple(Qubit(f, "flag") for f in flags)
    )
    circ = Circuit(qubits, tuple(gates), meta={"generator": str(gen)})
    circ.meta["flag_only_errors"] = _single_flag_localization(circ, w)
    return circ


def _single_flag_localization(circ: Circuit, w: int) -> dict[int, tuple[str, ...]]:
    """For each flag, the residual Z errors reachable by single faults that
    raise that flag alone (all other flags quiet)."""
    from . import sim

    table: dict[int, set[str]] = {i: set() for i in range(1, w + 1)}
    for fault in sim.enumerate_single_faults(circ):
        frame = sim.propagate(circ, fault)
        raised = [i for i in range(1, w + 1) if frame.flips[f"flag{i}"]]
        if len(raised) == 1:
            table[raised[0]].add(str(frame.data_error.z_part()))
    return {i: tuple(sorted(errs)) for i, errs in table.items()}


def shared_flag_multi_extraction(gens: Sequence[PauliOperator]) -> Circuit:
    """Several Z-error syndromes read out at once with one shared flag.

    One ancilla per generator, prepared in |+> and coupled as CNOT control
    into every data qubit of its support, reads the X parity check on that
    support; on the seven-qubit code those supports coincide with the Z
    rows, so the readout is the syndrome that identifies Z errors.
    Couplings run in data-qubit order (within a qubit, ancilla 1 first),
    and each ancilla is routed through the shared flag just before its
    final coupling.  No single fault can deposit more than one Z on the
    data, and a quiet flag also bounds the X side by weight 1; Z deposited
    mid-round registers only on the couplings still to come, so a raised
    flag leaves some readouts consistent with several different Z errors.
    The meta table classifies those flag-raised runs by readout and marks
    the readouts that cannot be trusted without a repeat.

    Sharing one flag wire across all the checks leaves the individual
    readouts unsharp on a codeword (the flag's X value folds into each
    ancilla, and the flag bit itself absorbs the joint ancilla Z parity),
    though the readouts always agree with one another.  Outcomes from this
    circuit are therefore only meaningful as flip-differences against a
    fault-free reference run, which is how the frame simulator reports
    them; sharp per-readout values would need a second flag pass on every
    ancilla and more two-qubit gates.
    """
    steane = hamming_code(3)
    z_rows = {str(steane.generators[i]): i for i in steane.z_generator_indices()}
    if not 2 <= len(gens) <= 3:
        raise ValueError("shared-flag extraction takes 2 or 3 generators")
    for g in gens:
        if str(g) not in z_rows:
            raise ValueError(f"unsupported generator {g}: need Z rows of the "
                             "seven-qubit code")
    if len({str(g) for g in gens}) != len(gens):
        raise ValueError("generators must be distinct")

    k = len(gens)
    ancs = [f"a{i}" for i in range(1, k + 1)]
    supports = [sorted(g.support()) for g in gens]
    n = gens[0].n
    gates = [Gate("prep_x", (a,)) for a in ancs]
    gates.append(Gate("prep_z", ("f1",)))
    for q in range(1, n + 1):
        for gi in range(k):
            if q not in supports[gi]:
                continue
            if q == supports[gi][-1]:
                gates.append(Gate("cnot", (ancs[gi], "f1")))
            gates.append(Gate("cnot", (ancs[gi], f"d{q}")))
    gates.append(Gate("meas_z", ("f1",), "flag"))
    gates += [Gate("meas_x", (a,), f"s{i}") for i, a in enumerate(ancs, 1)]
    qubits = (
        data_qubits(n)
        + tuple(Qubit(a, "syndrome") for a in ancs)
        + (Qubit("f1", "flag"),)
    )
    circ = Circuit(qubits, tuple(gates), meta={
        "generators": tuple(str(g) for g in gens),
    })
    classes, ambiguous = _shared_flag_classes(circ, steane, gens)
    circ.meta["flagged_z_classes"] = classes
    circ.meta["ambiguous_syndromes"] = ambiguous
    circ.meta["disposition"] = "requires verification" if ambiguous else "decodable"
    return circ


def _shared_flag_classes(
    circ: Circuit, code, gens: Sequence[PauliOperator]
) -> tuple[dict[str, tuple[str, ...]], dict[str, tuple[str, ...]]]:
    """Group the Z parts of flag-raised single-fault residuals by the
    syndrome readout.  A readout is ambiguous when its classes go beyond
    {identity, the error the readout names}: correcting by readout alone
    could then add a second Z to the data."""
    from . import sim

    k = len(gens)
    by_syndrome: dict[str, dict[PauliOperator, PauliOperator]] = {}
    for fault in sim.enumerate_single_faults(circ):
        frame = sim.propagate(circ, fault)
        if not frame.flips["flag"]:
            continue
        key = "".join(str(frame.flips[f"s{i}"]) for i in range(1, k + 1))
        z_part = frame.data_error.z_part()
        canon = code.canonical_rep(z_part)
        bucket = by_syndrome.setdefault(key, {})
        held = bucket.get(canon)
        if held is None or (z_part.weight(), str(z_part)) < (held.weight(), str(held)):
            bucket[canon] = z_part
    classes = {
        key: tuple(sorted(str(p) for p in reps.values()))
        for key, reps in sorted(by_syndrome.items())
    }
    identity = PauliOperator.identity(gens[0].n)
    ambiguous = {}
    for key, reps in sorted(by_syndrome.items()):
        if key == "0" * k:
            continue
        named = _readout_named_error(key, gens, code)
        allowed = {code.canonical_rep(identity), code.canonical_rep(named)}
        if not set(reps) <= allowed:
            ambiguous[key] = classes[key]
    return classes, ambiguous


def _readout_named_error(key: str, gens: Sequence[PauliOperator], code) -> PauliOperator:
    """The single-Z error whose readout bits (membership of its qubit in
    each measured support) equal the key, or identity if none matches."""
    n = gens[0].n
    want = tuple(int(b) for b in key)
    for q in range(1, n + 1):
        bits = tuple(1 if q in g.support() else 0 for g in gens)
        if bits == want:
            return PauliOperator.single(n, q, "Z")
    return PauliOperator.identity(n)


_GRAPH_CYCLE = ((1, 2), (2, 3), (3, 4), (4, 5), (5, 1))


def _graph_state_gates() -> list[Gate]:
    gates = [Gate("prep_x", (f"d{q}",)) for q in range(1, 6)]
    gates += [Gate("cz", (f"d{a}", f"d{b}")) for a, b in _GRAPH_CYCLE]
    return gates


def prep_plus_513() -> Circuit:
    """Five-cycle graph state, then three flagged syndrome checks; accept
    only if every syndrome and flag reads 0."""
    checked = (
        PauliOperator.from_string("XZZXI"),
        PauliOperator.from_string("IXZZX"),
        PauliOperator.from_string("XIXZZ"),
    )
    gates = _graph_state_gates()
    labels = []
    for i, gen in enumerate(checked, 1):
        order = tuple(sorted(gen.support()))
        gates += _flagged_gates(gen, order, "a1", "f1", f"s{i}", f"flag{i}")
        labels += [(f"flag{i}", 0), (f"s{i}", 0)]
    qubits = data_qubits(5) + (Qubit("a1", "syndrome"), Qubit("f1", "flag"))
    meta = {"checked": tuple(str(g) for g in checked)}
    return Circuit(qubits, tuple(gates), tuple(labels), meta=meta)


_MEAS_X_513 = (
    ("XZIIZ", (5, 1, 2)),
    ("ZXZII", (1, 2, 3)),
    ("IIZXZ", (3, 4, 5)),
)


def measure_logicalX_513_segments() -> tuple[Circuit, ...]:
    """The four segments of the destructive logical-X measurement: three
    flagged parity checks and the decode-and-measure finale.

    Segment metadata lists each check's flag-raised error candidates; the
    branch logic joining the segments lives in protocol.py.
    """
    segments = []
    for text, order in _MEAS_X_513:
        gen = PauliOperator.from_string(text)
        ordering = FlagOrdering(gen, order)
        gates = tuple(_flagged_gates(gen, order, "a1", "f1", "s", "flag"))
        qubits = data_qubits(5) + (Qubit("a1", "syndrome"), Qubit("f1", "flag"))
        meta = {
            "measures": text,
            "order": order,
            "flagged_candidates": tuple(
                str(p) for p in flagged_error_candidates(ordering)
            ),
        }
        segments.append(Circuit(qubits, gates, meta=meta))
    decode = [Gate("cz", (f"d{a}", f"d{b}")) for a, b in _GRAPH_CYCLE]
    decode += [Gate("meas_x", (f"d{q}",), f"m{q}") for q in range(1, 6)]
    segments.append(
        Circuit(data_qubits(5), tuple(decode), meta={"measures": "XXXXX"})
    )
    return tuple(segments)


_PREP_1573_PIVOTS = (8, 4, 2, 1)
_PREP_1573_FANOUT = {
    8: (12, 9, 10, 11, 13, 14, 15),
    4: (12, 5, 6, 7, 13, 14, 15),
    2: (3, 6, 7, 10, 11, 14, 15),
    1: (3, 5, 7, 9, 11, 13, 15),
}
_PREP_1573_CHECK = (1, 2, 3, 4, 8, 12)


def prep_0_1573() -> Circuit:
    """Encoding network for the 15-qubit all-zero logical state plus one
    postselected Z-parity check against X fanout faults.

    The X and Z parts of a single fault's residual each stay weight one,
    though their product may have weight two; the parts must be corrected
    per sector (meta: css_separate).
    """
    gates = [Gate("prep_x", (f"d{p}",)) for p in _PREP_1573_PIVOTS]
    rest = sorted(set(range(1, 16)) - set(_PREP_1573_PIVOTS))
    gates += [Gate("prep_z", (f"d{q}",)) for q in rest]
    for p in _PREP_1573_PIVOTS:
        gates += [Gate("cnot", (f"d{p}", f"d{t}")) for t in _PREP_1573_FANOUT[p]]
    gates.append(Gate("prep_z", ("a1",)))
    gates += [Gate("couple_z", (f"d{v}", "a1")) for v in _PREP_1573_CHECK]
    gates.append(Gate("meas_z", ("a1",), "check"))
    qubits = data_qubits(15) + (Qubit("a1", "syndrome"),)
    meta = {"css_separate": True, "check_support": _PREP_1573_CHECK}
    return Circuit(qubits, tuple(gates), (("check", 0),), meta=meta)


def _chain(op_from: int, op_to: int) -> list[Gate]:
    """CNOT chain d_from -> d_from+1 -> ... -> d_to."""
    return [Gate("cnot", (f"d{q}", f"d{q + 1}")) for q in range(op_from, op_to)]


def _dual_chain(top: int) -> list[Gate]:
    """CNOT chain binding d1..d_top into a dual cat, bottom link first.

    The order is forced: each gate lifts the Z seed on d1 one step up the
    chain, so d2 -> d1 must fire before d3 -> d2 and so on.
    """
    return [Gate("cnot", (f"d{q}", f"d{q - 1}")) for q in range(2, top + 1)]


def _parity_check(kind: str, u: int, v: int, anc: str, label: str) -> list[Gate]:
    op = "couple_x" if kind == "x" else "couple_z"
    return [
        Gate("prep_z", (anc,)),
        Gate(op, (f"d{u}", anc)),
        Gate(op, (f"d{v}", anc)),
        Gate("meas_z", (anc,), label),
    ]


def prep_nn22(n: int, j: int) -> Circuit:
    """Prepare the encoded state with the first j logical qubits in plus.

    j = 0 is a plain cat chain with an end-to-end Z check.  Odd j is a
    tensor product: a dual cat on qubits 1..j+1 (X-checked) and a cat on
    the rest (Z-checked).  Even j > 0 entangles across the cut: a dual cat
    on 1..j+2 is X-checked, then extended chain-wise into a cat tail with a
    final Z check.  All checks are postselected on 0.
    """
    if n % 2 or n < 4:
        raise ValueError(f"block size must be even and >= 4, got {n}")
    if not 0 <= j <= n - 2:
        raise ValueError(f"j={j} outside 0..{n - 2}")
    accept: list[tuple[str, int]] = []
    if j == 0:
        gates = [Gate("prep_x", ("d1",))]
        gates += [Gate("prep_z", (f"d{q}",)) for q in range(2, n + 1)]
        gates += _chain(1, n)
        gates += _parity_check("z", 1, n, "a1", "check1")
        accept.append(("check1", 0))
        ancillas = (Qubit("a1", "syndrome"),)
    elif j % 2:
        top = j + 1
        gates = [Gate("prep_z", ("d1",))]
        gates += [Gate("prep_x", (f"d{q}",)) for q in range(2, top + 1)]
        gates += _dual_chain(top)
        gates += _parity_check("x", 1, top, "a1", "check1")
        gates += [Gate("prep_x", (f"d{top + 1}",))]
        gates += [Gate("prep_z", (f"d{q}",)) for q in range(top + 2, n + 1)]
        gates += _chain(top + 1, n)
        gates += _parity_check("z", top + 1, n, "a2", "check2")
        accept += [("check1", 0), ("check2", 0)]
        ancillas = (Qubit("a1", "syndrome"), Qubit("a2", "syndrome"))
    else:
        top = j + 2
        gates = [Gate("prep_z", ("d1",))]
        gates += [Gate("prep_x", (f"d{q}",)) for q in range(2, top + 1)]
        gates += _dual_chain(top)
        gates += _parity_check("x", 1, top, "a1", "check1")
        accept.append(("check1", 0))
        ancillas = (Qubit("a1", "syndrome"),)
        if top < n:
            gates += [Gate("prep_z", (f"d{q}",)) for q in range(top + 1, n + 1)]
            gates += _chain(top, n)
            gates += _parity_check("z", top, n, "a2", "check2")
            accept.append(("check2", 0))
            ancillas += (Qubit("a2", "syndrome"),)
    qubits = data_qubits(n) + ancillas
    return Circuit(qubits, tuple(gates), tuple(accept), meta={"j": j})


def nn22_state_logicals(n: int, j: int) -> tuple[PauliOperator, ...]:
    """The logical operators prep_nn22(n, j) fixes besides the code itself:
    X pairs for the j plus-state logicals, Z pairs for the zero-state rest."""
    if n % 2 or n < 4:
        raise ValueError(f"block size must be even and >= 4, got {n}")
    if not 0 <= j <= n - 2:
        raise ValueError(f"j={j} outside 0..{n - 2}")
    out = [PauliOperator(n, (1 << (q - 1)) | (1 << q), 0) for q in range(1, j + 1)]
    out += [PauliOperator(n, 0, (1 << (q - 1)) | (1 << q)) for q in range(j + 2, n)]
    return tuple(out)


def logical_z_parity_nn22(n: int, which: Iterable[int] | str) -> PauliOperator:
    """The Z parity operator for a set of logical indices, reduced to its
    minimum-weight form modulo the all-Z stabilizer."""
    if isinstance(which, str):
        if which != "all":
            raise ValueError(f"unknown selector {which!r}")
        chosen = range(1, n - 1)
    else:
        chosen = sorted(set(which))
        if not chosen:
            raise ValueError("empty logical selection")
        if chosen[0] < 1 or chosen[-1] > n - 2:
            raise ValueError(f"logical indices {chosen} outside 1..{n - 2}")
    op = PauliOperator.identity(n)
    for j in chosen:
        op = op * PauliOperator.from_string(f"Z{{{j + 1},{n}}}", n)
    alt = op * PauliOperator(n, 0, (1 << n) - 1)
    return min(op, alt, key=lambda p: (p.weight(), str(p)))


def measure_logicalZ_nn22(n: int, which: Iterable[int] | str) -> Circuit:
    """Projective logical Z-parity measurement, done twice in one circuit.

    Weight-2 parities use a bare ancilla; anything wider runs the flagged
    extraction twice.  Disagreeing repetitions (or any raised flag) mean
    the protocol reports "error" instead of an outcome.
    """
    op = logical_z_parity_nn22(n, which)
    support = sorted(op.support())
    gates: list[Gate] = []
    if len(support) == 2:
        u, v = support
        for rep in (1, 2):
            gates += _parity_check("z", u, v, "a1", f"m{rep}")
        qubits = data_qubits(n) + (Qubit("a1", "syndrome"),)
    else:
        for rep in (1, 2):
            gates += _flagged_gates(op, support, "a1", "f1", f"m{rep}", f"flag{rep}")
        qubits = data_qubits(n) + (Qubit("a1", "syndrome"), Qubit("f1", "flag"))
    meta = {"operator": str(op), "repetitions": ("m1", "m2")}
    return Circuit(qubits, tuple(gates), meta=meta)
