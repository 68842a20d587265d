import itertools

import pytest

from flagqec.pauli import (
    PauliOperator,
    StabilizerCode,
    coset_min_weight,
    group_elements,
    kernel_basis_gf2,
    logical_pairs,
    reduce_gf2,
    rref_gf2,
    symplectic_product,
    weight_le1_paulis,
)

P = PauliOperator.from_string


def code_513() -> StabilizerCode:
    gens = tuple(P(s) for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"))
    return StabilizerCode(
        name="5_1_3", n=5, k=1, d=3,
        generators=gens,
        logical_x=(P("XXXXX"),),
        logical_z=(P("ZZZZZ"),),
        is_css=False,
    )


def test_single_qubit_products_anticommute():
    x = PauliOperator.single(1, 1, "X")
    y = PauliOperator.single(1, 1, "Y")
    z = PauliOperator.single(1, 1, "Z")
    assert symplectic_product(x, z) == 1
    assert symplectic_product(x, y) == 1
    assert symplectic_product(y, z) == 1
    assert symplectic_product(x, x) == 0
    assert str(x * z) == "Y"
    assert (x * x).is_identity()


def test_disjoint_supports_commute():
    a = P("XIIII")
    b = P("IZZII")
    assert a.commutes(b)
    assert str(a * b) == "XZZII"


def test_string_round_trip():
    for text in ("IIZXI", "XZZXI", "YIYXX", "IIIII"):
        assert str(P(text)) == text


def test_subscript_set_parsing():
    n = 9
    assert str(P("Z{8,9}", n=n)) == "IIIIIIIZZ"
    mixed = P("Z{2,5}X{3,8}", n=n)
    assert mixed.letter(2) == "Z"
    assert mixed.letter(3) == "X"
    assert mixed.letter(8) == "X"
    assert mixed.weight() == 4
    assert P("Z3", n=5) == PauliOperator.single(5, 3, "Z")
    # overlapping subscripts multiply
    assert P("Z{1}X{1}", n=2).letter(1) == "Y"
    assert P(" X{1, 3} ", n=3) == P("XIX")


def test_set_form_rendering():
    assert P("IIIIIIIZZ").set_form() == "Z{8,9}"
    assert P("IXZXI").set_form() == "X{2,4}Z{3}"
    assert PauliOperator.identity(4).set_form() == "I"


@pytest.mark.parametrize("bad", ["IIQ", "Z{0}", "Z{6}", "W3", "Z{1,}x"])
def test_parser_rejects_garbage(bad):
    with pytest.raises(ValueError):
        P(bad, n=5)


def test_subscript_form_requires_qubit_count():
    with pytest.raises(ValueError):
        P("Z{1,2}")


def test_weight_and_support():
    p = P("IXZYI")
    assert p.weight() == 3
    assert p.support() == (2, 3, 4)
    assert str(p.x_part()) == "IXIXI"
    assert str(p.z_part()) == "IIZZI"


# Hand-checked syndrome table for the five-qubit code, generator order
# XZZXI, IXZZX, XIXZZ, ZXIXZ.
W1_SYNDROMES_513 = {
    "XIIII": (0, 0, 0, 1), "IXIII": (1, 0, 0, 0), "IIXII": (1, 1, 0, 0),
    "IIIXI": (0, 1, 1, 0), "IIIIX": (0, 0, 1, 1),
    "ZIIII": (1, 0, 1, 0), "IZIII": (0, 1, 0, 1), "IIZII": (0, 0, 1, 0),
    "IIIZI": (1, 0, 0, 1), "IIIIZ": (0, 1, 0, 0),
    "YIIII": (1, 0, 1, 1), "IYIII": (1, 1, 0, 1), "IIYII": (1, 1, 1, 0),
    "IIIYI": (1, 1, 1, 1), "IIIIY": (0, 1, 1, 1),
}


def test_513_weight1_syndromes_are_the_frozen_table():
    code = code_513()
    seen = {}
    for text, expect in W1_SYNDROMES_513.items():
        s = code.syndrome_of(P(text))
        assert s == expect, text
        seen[s] = text
    # perfect code: 15 nonzero syndromes, all distinct
    assert len(seen) == 15
    assert (0, 0, 0, 0) not in seen


def test_syndrome_is_linear():
    code = code_513()
    paulis = [P("IIZXI"), P("XIIIY"), P("ZZZZZ"), P("IYXIZ")]
    for a, b in itertools.combinations(paulis, 2):
        sa = code.syndrome_of(a)
        sb = code.syndrome_of(b)
        sab = code.syndrome_of(a * b)
        assert sab == tuple(x ^ y for x, y in zip(sa, sb))


def test_min_weight_correction_inverts_weight1():
    code = code_513()
    for p in weight_le1_paulis(5):
        assert code.min_weight_correction(code.syndrome_of(p)) == p


def test_d2_code_only_decodes_the_trivial_syndrome():
    # [[n,n-2,2]] toy: X..X and Z..Z rows; only the trivial syndrome decodes
    gens = (P("XXXX"), P("ZZZZ"))
    code = StabilizerCode(
        name="nn22_4", n=4, k=2, d=2,
        generators=gens,
        logical_x=(P("XXII"), P("XIXI")),
        logical_z=(P("IZIZ"), P("IIZZ")),
        is_css=True,
    )
    assert code.min_weight_correction((0, 0)).is_identity()
    with pytest.raises(ValueError):
        code.min_weight_correction((1, 0))


def test_steane_correction_for_a_weight3_z_error():
    rows_x = ("IIIXXXX", "IXXIIXX", "XIXIXIX")
    rows_z = tuple(r.replace("X", "Z") for r in rows_x)
    code = StabilizerCode(
        name="7_1_3", n=7, k=1, d=3,
        generators=tuple(P(r) for r in rows_x + rows_z),
        logical_x=(P("XXXXXXX"),),
        logical_z=(P("ZZZZZZZ"),),
        is_css=True,
    )
    s = code.syndrome_of(P("IIIIZZZ"))
    assert s == (1, 0, 0, 0, 0, 0)
    assert code.min_weight_correction(s) == P("Z{4}", n=7)
    # the corrected remainder is a stabilizer, not a logical
    residual = P("IIIIZZZ") * P("Z{4}", n=7)
    assert code.logical_effect(residual) == "stabilizer"


def test_513_stabilizer_group_is_the_expected_sixteen():
    code = code_513()
    elements = {str(g) for g in group_elements(list(code.generators))}
    assert elements == {
        "IIIII", "XZZXI", "IXZZX", "XIXZZ", "ZXIXZ",
        "XYIYX", "IZYYZ", "YYZIZ", "XXYIY", "ZIZYY",
        "YXXYI", "IYXXY", "YZIZY", "ZYYZI", "YIYXX", "ZZXIX",
    }
    for text in elements:
        assert code.in_stabilizer_group(P(text))
    assert not code.in_stabilizer_group(P("ZZZZZ"))


def test_logical_effect_classification():
    code = code_513()
    assert code.logical_effect(PauliOperator.identity(5)) == "identity"
    assert code.logical_effect(P("XZZXI")) == "stabilizer"
    assert code.logical_effect(P("ZZZZZ")) == "logical"
    assert code.logical_effect(P("IIZXZ")) == "logical"
    with pytest.raises(ValueError):
        code.logical_effect(P("IIZXI"))  # nonzero syndrome


def test_coset_reduction_identifies_equivalent_errors():
    code = code_513()
    # IZZXI times the first generator is X on qubit 1
    assert P("IZZXI") * P("XZZXI") == P("XIIII")
    assert code.canonical_rep(P("IZZXI")) == code.canonical_rep(P("XIIII"))
    assert code.coset_min_weight(P("IZZXI")) == 1
    # IIZXI shares no coset with any weight<=1 Pauli
    assert code.coset_min_weight(P("IIZXI")) == 2


def test_generic_coset_min_weight_against_brute_force():
    gens = [P("XZZXI"), P("IXZZX")]
    group = group_elements(gens)
    assert len(group) == 4
    for text in ("IIZXI", "ZZZZZ", "XIXZZ"):
        p = P(text)
        brute = min((p * g).weight() for g in group)
        assert coset_min_weight(p, gens) == brute


def test_rref_reduce_and_kernel_roundtrip():
    rows = [0b1100, 0b0110, 0b1010]
    basis = rref_gf2(rows)
    assert len(basis) == 2  # third row is the sum of the first two
    assert reduce_gf2(0b1100 ^ 0b0110, basis) == 0
    ker = kernel_basis_gf2(rows, 4)
    assert len(ker) == 2
    for v in ker:
        for r in rows:
            assert (v & r).bit_count() % 2 == 0


def test_logical_pairs_for_the_five_qubit_group():
    gens = [P(s) for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")]
    pairs = logical_pairs(5, gens)
    assert len(pairs) == 1
    a, b = pairs[0]
    assert symplectic_product(a, b) == 1
    for g in gens:
        assert a.commutes(g)
        assert b.commutes(g)
    # representatives lie outside the stabilizer group
    stab = {str(g) for g in group_elements(gens)}
    assert str(a) not in stab
    assert str(b) not in stab


def test_logical_pairs_structure_for_a_bigger_group():
    gens = [P("XXXXXX"), P("ZZZZZZ")]
    pairs = logical_pairs(6, gens)
    assert len(pairs) == 4
    for i, (xi, zi) in enumerate(pairs):
        assert symplectic_product(xi, zi) == 1
        for g in gens:
            assert xi.commutes(g)
            assert zi.commutes(g)
        for j, (xj, zj) in enumerate(pairs):
            if i != j:
                assert xi.commutes(xj)
                assert xi.commutes(zj)
                assert zi.commutes(zj)


def test_code_validation_rejects_bad_input():
    gens = (P("XZZXI"), P("IXZZX"), P("XIXZZ"), P("ZXIXZ"))
    with pytest.raises(ValueError):
        StabilizerCode(
            name="bad", n=5, k=1, d=3, generators=gens,
            logical_x=(P("XXXXX"),), logical_z=(P("IIZXI"),),  # hits generators
            is_css=False,
        )
    with pytest.raises(ValueError):
        StabilizerCode(
            name="dependent", n=5, k=2, d=3,
            generators=(P("XZZXI"), P("IXZZX"), P("XYIYX")),  # g1*g2
            logical_x=(P("XXXXX"), P("XXXXX")),
            logical_z=(P("ZZZZZ"), P("ZZZZZ")),
            is_css=False,
        )
