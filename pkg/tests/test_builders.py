import pytest

from flagqec import builders, sim
from flagqec.builders import (
    flagged_extraction,
    measure_logicalX_513_segments,
    measure_logicalZ_nn22,
    natural_ordering,
    overlapping_flag_extraction,
    prep_0_1573,
    prep_nn22,
    prep_plus_513,
    shared_flag_multi_extraction,
    shor_cat_extraction,
    syk_half_cat_extraction,
    unflagged_extraction,
)
from flagqec.circuit import Circuit, FaultLocation, Gate, Qubit, deserialize, serialize
from flagqec.codes import detection_code, five_qubit_code, flagged_error_candidates, hamming_code
from flagqec.pauli import PauliOperator

from oracles import run_circuit

P = PauliOperator.from_string


def chained(first: Circuit, second: Circuit) -> Circuit:
    """Run one circuit into another on the union roster (test harness only)."""
    have = {q.id for q in first.qubits}
    roster = first.qubits + tuple(q for q in second.qubits if q.id not in have)
    return Circuit(roster, first.gates + second.gates, first.accept + second.accept)


def deterministic_zero(circ: Circuit, labels) -> bool:
    _, outs = run_circuit(circ)
    return all(outs[lab] == (0, True) for lab in labels)


def state_preps(n: int, letters: str) -> tuple[Gate, ...]:
    op = {"0": "prep_z", "+": "prep_x"}
    return tuple(Gate(op[c], (f"d{q}",)) for q, c in enumerate(letters * n if len(letters) == 1 else letters, 1))


# ----------------------------------------------------------- basic shapes


def test_unflagged_extraction_shape():
    circ = unflagged_extraction(natural_ordering(P("XZZXI")))
    assert [g.op for g in circ.gates] == [
        "prep_z", "couple_x", "couple_z", "couple_z", "couple_x", "meas_z",
    ]
    assert circ.labels == ("s",)
    assert circ.meta["generator"] == "XZZXI"
    assert len(circ.qubits) == 6


def test_flagged_extraction_gate_order():
    circ = flagged_extraction(natural_ordering(P("XZZXI")))
    assert [g.op for g in circ.gates] == [
        "prep_z", "prep_x", "couple_x", "cnot", "couple_z",
        "couple_z", "cnot", "couple_x", "meas_x", "meas_z",
    ]
    # both flag windows run from the flag into the syndrome wire
    cnots = [g for g in circ.gates if g.op == "cnot"]
    assert all(g.args == ("f1", "a1") for g in cnots)
    assert circ.labels == ("flag", "s")
    assert circ.meta["order"] == (1, 2, 3, 4)
    assert circ.meta["flagged_candidates"] == tuple(
        str(p) for p in flagged_error_candidates(natural_ordering(P("XZZXI")))
    )


def test_flagged_extraction_needs_weight_three():
    with pytest.raises(ValueError, match="at least 3"):
        flagged_extraction(natural_ordering(P("ZZII")))


def test_shor_cat_shape_and_verification():
    circ = shor_cat_extraction(P("ZZZZ"))
    assert circ.accept == (("verify", 0),)
    assert circ.meta["syndrome_labels"] == ("m1", "m2", "m3", "m4")
    # data coupled by CZ for a Z generator, CNOT for an X generator
    assert sum(g.op == "cz" for g in circ.gates) == 4
    xcirc = shor_cat_extraction(P("XXXX"))
    assert sum(g.op == "cnot" and g.args[1].startswith("d") for g in xcirc.gates) == 4
    # an X landing on the chain target spreads to the last cat qubit and
    # is caught by the verification ancilla
    chain = [i for i, g in enumerate(circ.gates)
             if g.op == "cnot" and g.args[0].startswith("c") and g.args[1].startswith("c")]
    frame = sim.propagate(circ, (FaultLocation(chain[0], "IX"),))
    assert frame.outcome("verify") == 1
    with pytest.raises(ValueError, match="weight >= 2"):
        shor_cat_extraction(P("ZIII"))
    with pytest.raises(ValueError, match="Y components"):
        shor_cat_extraction(P("YZZY"))


def test_syk_half_cat_shapes():
    circ = syk_half_cat_extraction(P("XXXXXX"))
    assert circ.meta["pairs"] == {"a1": (1, 2), "a2": (3, 4), "a3": (5, 6)}
    assert circ.labels == ("syndrome", "z1", "z2")
    # the star is applied before and after the data couplings
    for leaf in ("a1", "a2"):
        star = [g for g in circ.gates if g == Gate("cnot", ("a3", leaf))]
        assert len(star) == 2
    # four data pairs need a coupled center
    wide = syk_half_cat_extraction(P("Z" * 8, n=8))
    assert wide.meta["pairs"]["a4"] == (7, 8)
    # weight four still uses three ancillas, center uncoupled
    small = syk_half_cat_extraction(P("ZZZZ"))
    assert small.meta["pairs"] == {"a1": (1, 2), "a2": (3, 4), "a3": ()}
    with pytest.raises(ValueError, match="even weight >= 4"):
        syk_half_cat_extraction(P("ZZZ"))
    with pytest.raises(ValueError, match="even weight >= 4"):
        syk_half_cat_extraction(P("ZZ"))
    with pytest.raises(ValueError, match="Y components"):
        syk_half_cat_extraction(P("XYYX"))


def test_overlapping_flag_localization_table():
    circ = overlapping_flag_extraction(P("ZZZZ"))
    assert circ.meta["flag_only_errors"] == {
        1: ("IIII", "IZZZ", "ZZZZ"),
        2: ("IIII", "IIZZ", "IZZZ"),
        3: ("IIII", "IIIZ", "IIZZ"),
        4: ("IIII", "IIIZ"),
    }
    with pytest.raises(ValueError, match="Z generators"):
        overlapping_flag_extraction(P("XZZX"))


# ------------------------------------------------------ shared-flag readout


def steane_z_rows():
    code = hamming_code(3)
    return [code.generators[i] for i in code.z_generator_indices()]


def test_shared_flag_structure():
    circ = shared_flag_multi_extraction(steane_z_rows())
    assert sum(g.op == "cnot" for g in circ.gates) == 15
    assert len(circ.gates) == 23
    assert len(circ.qubits) - 7 == 4
    assert circ.labels == ("flag", "s1", "s2", "s3")
    two = shared_flag_multi_extraction(steane_z_rows()[:2])
    assert sum(g.op == "cnot" for g in two.gates) == 10
    assert len(two.qubits) - 7 == 3


def test_shared_flag_readout_ambiguity():
    circ = shared_flag_multi_extraction(steane_z_rows())
    assert circ.meta["disposition"] == "requires verification"
    assert circ.meta["ambiguous_syndromes"] == {
        "001": ("IIIIIII", "IIIIZII", "IIZIIII", "ZIIIIII"),
        "010": ("IIIIIII", "IIIIIZI", "IZIIIII"),
    }
    # every other readout pins down its error up to stabilizer
    classes = circ.meta["flagged_z_classes"]
    assert set(circ.meta["ambiguous_syndromes"]) < set(classes)


def test_shared_flag_quiet_runs_stay_correctable():
    circ = shared_flag_multi_extraction(steane_z_rows())
    for fault in sim.enumerate_single_faults(circ):
        frame = sim.propagate(circ, fault)
        if frame.flips["flag"]:
            continue
        assert frame.data_error.x_part().weight() <= 1
        assert frame.data_error.z_part().weight() <= 1


def test_shared_flag_rejections():
    rows = steane_z_rows()
    with pytest.raises(ValueError, match="need Z rows"):
        shared_flag_multi_extraction([rows[0], P("IIIXXXX")])
    with pytest.raises(ValueError, match="2 or 3 generators"):
        shared_flag_multi_extraction(rows[:1])
    with pytest.raises(ValueError, match="distinct"):
        shared_flag_multi_extraction([rows[0], rows[0]])


# ------------------------------------------------------------ preparations


def test_prep_plus_513_shape():
    circ = prep_plus_513()
    assert circ.accept == (
        ("flag1", 0), ("s1", 0), ("flag2", 0), ("s2", 0), ("flag3", 0), ("s3", 0),
    )
    assert circ.meta["checked"] == ("XZZXI", "IXZZX", "XIXZZ")
    assert [g.op for g in circ.gates[:10]] == ["prep_x"] * 5 + ["cz"] * 5


def test_prep_plus_513_state():
    circ = prep_plus_513()
    tab, outs = run_circuit(circ)
    assert all(outs[lab] == (val, True) for lab, val in circ.accept)
    m = len(circ.qubits)
    for gen in five_qubit_code().generators:
        assert tab.stabilizes(PauliOperator(m, gen.x, gen.z)) == 1


def test_prep_0_1573_shape():
    circ = prep_0_1573()
    assert circ.accept == (("check", 0),)
    assert circ.meta["css_separate"] is True
    assert sum(g.op == "cnot" for g in circ.gates) == 28
    assert sum(g.op == "couple_z" for g in circ.gates) == 6


def test_prep_0_1573_state():
    circ = prep_0_1573()
    tab, outs = run_circuit(circ)
    assert all(outs[lab] == (val, True) for lab, val in circ.accept)
    code = hamming_code(4)
    m = len(circ.qubits)
    for gen in code.generators:
        assert tab.stabilizes(PauliOperator(m, gen.x, gen.z)) == 1
    # the logical zero: every logical Z reads +1, no logical X is fixed
    for lz in code.logical_z:
        assert tab.stabilizes(PauliOperator(m, lz.x, lz.z)) == 1
    assert tab.stabilizes(PauliOperator(m, code.logical_x[0].x, code.logical_x[0].z)) is None


def test_prep_nn22_validation():
    with pytest.raises(ValueError, match="even and >= 4"):
        prep_nn22(5, 0)
    with pytest.raises(ValueError, match="outside"):
        prep_nn22(4, 3)


@pytest.mark.parametrize("n", (4, 6, 8, 10))
def test_prep_nn22_states(n):
    for j in range(n - 1):
        circ = prep_nn22(n, j)
        tab, outs = run_circuit(circ)
        assert all(outs[lab] == (val, True) for lab, val in circ.accept), (n, j)
        m = len(circ.qubits)
        full = (1 << n) - 1
        gens = [PauliOperator(m, full, 0), PauliOperator(m, 0, full)]
        # plus-state logicals fix their X pairs, zero-state logicals their Z pairs
        for q in range(1, j + 1):
            gens.append(PauliOperator(m, (1 << (q - 1)) | (1 << q), 0))
        for q in range(j + 2, n):
            gens.append(PauliOperator(m, 0, (1 << (q - 1)) | (1 << q)))
        for g in gens:
            assert tab.stabilizes(g) == 1, (n, j, g)


# ------------------------------------------------------------ measurements


def test_logical_z_parity_nn22():
    assert str(builders.logical_z_parity_nn22(4, (1,))) == "IZIZ"
    assert str(builders.logical_z_parity_nn22(4, "all")) == "IZZI"
    # the all-Z stabilizer halves anything above weight n/2
    assert str(builders.logical_z_parity_nn22(6, (1, 2, 3))) == "ZIIIZI"
    with pytest.raises(ValueError, match="empty"):
        builders.logical_z_parity_nn22(4, ())
    with pytest.raises(ValueError, match="outside"):
        builders.logical_z_parity_nn22(4, (3,))
    with pytest.raises(ValueError, match="unknown selector"):
        builders.logical_z_parity_nn22(4, "evens")


def test_measure_logicalZ_nn22_branches():
    bare = measure_logicalZ_nn22(4, (1,))
    assert bare.labels == ("m1", "m2")
    assert all(g.op != "cnot" for g in bare.gates)
    wide = measure_logicalZ_nn22(8, (1, 2, 3))
    assert wide.meta["operator"] == "IZZZIIIZ"
    assert wide.labels == ("flag1", "m1", "flag2", "m2")


@pytest.mark.parametrize("n,j,which", [(4, 0, (1, 2)), (8, 0, (1, 2, 3)), (8, 1, (2, 3))])
def test_measure_logicalZ_nn22_reads_zero_on_zeroed_logicals(n, j, which):
    combined = chained(prep_nn22(n, j), measure_logicalZ_nn22(n, which))
    _, outs = run_circuit(combined)
    assert outs["m1"] == (0, True)
    assert outs["m2"] == (0, True)
    for lab in combined.labels:
        if lab.startswith("flag"):
            assert outs[lab] == (0, True)


def test_measure_logicalX_513_segment_shapes():
    segs = measure_logicalX_513_segments()
    assert len(segs) == 4
    assert [s.meta["measures"] for s in segs[:3]] == ["XZIIZ", "ZXZII", "IIZXZ"]
    assert [s.meta["order"] for s in segs[:3]] == [(5, 1, 2), (1, 2, 3), (3, 4, 5)]
    for s in segs[:3]:
        assert s.labels == ("flag", "s")
    assert segs[3].meta["measures"] == "XXXXX"
    assert [g.op for g in segs[3].gates] == ["cz"] * 5 + ["meas_x"] * 5


def test_measure_logicalX_513_reads_zero_after_prep():
    prep = prep_plus_513()
    for seg in measure_logicalX_513_segments()[:3]:
        _, outs = run_circuit(chained(prep, seg))
        assert outs["s"] == (0, True)
        assert outs["flag"] == (0, True)
    _, outs = run_circuit(chained(prep, measure_logicalX_513_segments()[3]))
    bit = 0
    for q in range(1, 6):
        value, deterministic = outs[f"m{q}"]
        assert deterministic
        bit ^= value
    assert bit == 0


# ------------------------------------------ honest-run syndrome determinism


def test_extraction_reads_zero_on_a_stabilized_state():
    # Z-type generator on the all-zeros state, X-type on the all-plus state
    cases = [
        (syk_half_cat_extraction(P("XXXXXX")), "+", ["syndrome", "z1", "z2"]),
        (
            syk_half_cat_extraction(
                hamming_code(4).generators[4]  # a weight-8 Z row
            ),
            "0",
            ["syndrome", "z1", "z2", "z3"],
        ),
        (overlapping_flag_extraction(P("ZZZZ")), "0",
         ["flag1", "flag2", "flag3", "flag4", "s"]),
        (flagged_extraction(natural_ordering(P("ZZZZ"))), "0", ["flag", "s"]),
    ]
    for circ, fill, labels in cases:
        n = len(circ.data_ids())
        primed = Circuit(circ.qubits, state_preps(n, fill) + circ.gates)
        assert deterministic_zero(primed, labels), circ.meta.get("generator")


def test_shor_cat_reads_the_generator_parity():
    # Individual cat readouts are random; only their parity carries the
    # syndrome, and the verification bit is sharp.  Force one readout high
    # and the rest must rebalance.
    for gen, fill in [(P("ZZZZ"), "0"), (P("XXXX"), "+")]:
        circ = shor_cat_extraction(gen)
        n = len(circ.data_ids())
        primed = Circuit(circ.qubits, state_preps(n, fill) + circ.gates)
        for forced in ({}, {"m1": 1}, {"m1": 1, "m3": 1}):
            _, outs = run_circuit(primed, forced)
            assert outs["verify"] == (0, True)
            assert outs["m1"][1] is False
            parity = 0
            for i in range(1, 5):
                parity ^= outs[f"m{i}"][0]
            assert parity == 0


def test_shared_flag_readouts_agree_on_the_codeword():
    # Encode the seven-qubit logical zero, then extract.  Sharing one flag
    # across all three checks leaves each readout individually unsharp (the
    # flag wire's X value folds into every ancilla), but the readouts still
    # agree with each other, so flip-differences against a reference run are
    # well defined.  The fault-free frame run is that reference.
    pivots = {4: (5, 6, 7), 2: (3, 6, 7), 1: (3, 5, 7)}
    gates = [Gate("prep_x", (f"d{p}",)) for p in pivots]
    gates += [Gate("prep_z", (f"d{q}",)) for q in (3, 5, 6, 7)]
    for p, targets in pivots.items():
        gates += [Gate("cnot", (f"d{p}", f"d{t}")) for t in targets]
    circ = shared_flag_multi_extraction(steane_z_rows())
    primed = Circuit(circ.qubits, tuple(gates) + circ.gates)
    for forced in ({}, {"s1": 1}, {"flag": 1}):
        _, outs = run_circuit(primed, forced)
        assert outs["s1"][0] == outs["s2"][0] == outs["s3"][0]
    assert run_circuit(primed, {"s1": 1})[1]["s2"] == (1, True)
    frame = sim.propagate(circ, ())
    assert all(frame.flips[lab] == 0 for lab in ("flag", "s1", "s2", "s3"))


def test_hamming_generator_check():
    # sanity for the contiguous-row pick above
    row = hamming_code(4).generators[4]
    assert str(row) == "IIIIIIIZZZZZZZZ"


# ------------------------------------------------------------ serialization


def all_builder_circuits():
    yield unflagged_extraction(natural_ordering(P("XZZXI")))
    yield flagged_extraction(natural_ordering(P("XIXZZ")))
    yield shor_cat_extraction(P("ZZZZ"))
    yield syk_half_cat_extraction(P("XXXXXX"))
    yield overlapping_flag_extraction(P("ZZZZ"))
    yield shared_flag_multi_extraction(steane_z_rows())
    yield prep_plus_513()
    yield prep_0_1573()
    yield prep_nn22(6, 3)
    yield measure_logicalZ_nn22(8, (1, 2, 3))
    yield from measure_logicalX_513_segments()


def test_builder_circuits_serialize_round_trip():
    for circ in all_builder_circuits():
        assert deserialize(serialize(circ)) == circ
