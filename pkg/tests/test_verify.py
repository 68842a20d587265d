import functools
import json

import pytest

from flagqec.builders import (
    nn22_state_logicals,
    prep_0_1573,
    prep_nn22,
    prep_plus_513,
    unflagged_extraction,
)
from flagqec.circuit import FaultLocation
from flagqec.codes import (
    FlagOrdering,
    detection_code,
    ec_orderings,
    five_qubit_code,
    get_code,
    hamming_code,
)
from flagqec.pauli import PauliOperator
from flagqec.protocol import (
    DetectionRound,
    ECRound,
    LogicalXMeasurement513,
    NaiveECRound,
    SykExtraction,
    UnflaggedDetectionRound,
    ideal_decode,
)
from flagqec.verify import (
    claim1_sweep,
    count_malignant_pairs,
    verify_prep_ft,
    verify_single_fault_ft,
    verify_syk_extraction,
)

P = PauliOperator.from_string


@functools.lru_cache
def ec_round(token: str) -> ECRound:
    code, orders = ec_orderings(token)
    return ECRound(code, orders)


@functools.lru_cache
def naive_round() -> NaiveECRound:
    code, orders = ec_orderings("5_1_3")
    return NaiveECRound(code, orders)


# --- positive FT verdicts ---------------------------------------------------


@pytest.mark.parametrize(
    "token", ["5_1_3", "7_1_3", "8_3_3r", "10_4_3", "11_5_3", "15_7_3"]
)
def test_flagged_ec_rounds_pass(token):
    report = verify_single_fault_ft(ec_round(token))
    assert report.passed, report.summary()
    assert report.locations > 0


@pytest.mark.parametrize("n", [4, 6, 8])
def test_flagged_detection_rounds_pass(n):
    report = verify_single_fault_ft(DetectionRound(n))
    assert report.passed, report.summary()


def test_logical_measurement_passes():
    report = verify_single_fault_ft(LogicalXMeasurement513())
    assert report.passed, report.summary()


def test_verdict_is_enumeration_order_independent():
    # running twice must give the identical report, faults sorted canonically
    a = verify_single_fault_ft(ec_round("5_1_3"))
    b = verify_single_fault_ft(ec_round("5_1_3"))
    assert a == b


# --- negative controls ------------------------------------------------------


def test_naive_round_fails_with_logical_miscorrection():
    report = verify_single_fault_ft(naive_round())
    assert not report.passed
    hits = [f for f in report.failures if f.faults == ((0, FaultLocation(2, "IZ")),)]
    assert hits, "the mid-sweep ancilla Z fault must be among the failures"
    assert hits[0].classification == "logical_after_decode"
    five = five_qubit_code()
    decoded = ideal_decode(five, P(hits[0].residual))
    assert five.logical_effect(decoded) == "logical"


def test_unflagged_detection_admits_undetected_logical():
    report = verify_single_fault_ft(UnflaggedDetectionRound(6))
    assert not report.passed
    residuals = {f.residual for f in report.failures}
    assert "IIXXXX" in residuals
    assert all(f.classification == "undetected_logical" for f in report.failures)


def test_unregistered_protocol_kind_is_rejected():
    syk = SykExtraction(five_qubit_code(), five_qubit_code().generators[0])
    with pytest.raises(ValueError, match="unregistered"):
        verify_single_fault_ft(syk)


# --- preparation circuits ---------------------------------------------------


def test_prep_plus_513_passes():
    five = five_qubit_code()
    report = verify_prep_ft(prep_plus_513(), five, logicals=(five.logical_x[0],))
    assert report.passed, report.summary()


def test_prep_0_1573_passes_css_separate_only():
    h4 = hamming_code(4)
    logicals = tuple(h4.logical_z)
    report = verify_prep_ft(prep_0_1573(), h4, logicals=logicals)
    assert report.passed, report.summary()
    combined = verify_prep_ft(
        prep_0_1573(), h4, logicals=logicals, css_separate=False
    )
    assert not combined.passed
    assert all(f.classification == "accepted_heavy_residual" for f in combined.failures)


@pytest.mark.parametrize("n,j", [(4, 0), (4, 2), (6, 2), (6, 4), (8, 3)])
def test_prep_nn22_passes(n, j):
    report = verify_prep_ft(
        prep_nn22(n, j), detection_code(n), nn22_state_logicals(n, j)
    )
    assert report.passed, report.summary()


def test_prep_nn22_relies_on_detectability():
    # a couple fault can leak a weight-3 residual past the postselection,
    # but only with a nonzero code syndrome, so the next round flags it
    report = verify_prep_ft(
        prep_nn22(6, 2),
        detection_code(6),
        nn22_state_logicals(6, 2),
        allow_detected=False,
    )
    assert not report.passed
    code = detection_code(6)
    for f in report.failures:
        assert any(code.syndrome_of(P(f.residual)))


def test_prep_verifier_requires_acceptance_predicate():
    five = five_qubit_code()
    circ = unflagged_extraction(FlagOrdering(five.generators[0], (1, 2, 3, 4)))
    with pytest.raises(ValueError, match="acceptance"):
        verify_prep_ft(circ, five)


# --- half-cat extraction ----------------------------------------------------


W10_GEN = "Z{3,5,6,7,9,10,11,12,13,14}"


def syk_cases():
    five = five_qubit_code()
    h4 = hamming_code(4)
    return [
        (five.generators[0], five),
        (P("XXXX"), detection_code(4)),
        (P("ZZZZZZ"), detection_code(6)),
        (h4.generators[4], h4),
        (P(W10_GEN, n=15), h4),
    ]


@pytest.mark.parametrize("gen,code", syk_cases())
def test_syk_extraction_passes(gen, code):
    report = verify_syk_extraction(gen, code)
    assert report.passed, report.summary()


def test_syk_w10_table_patterns():
    syk = SykExtraction(hamming_code(4), P(W10_GEN, n=15))
    required = {
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (0, 0, 1, 0),
        (0, 0, 0, 1),
        (1, 1, 1, 1),
        (1, 1, 0, 0),
        (1, 1, 1, 0),
    }
    assert required <= set(syk.table)
    # a lone leaf hit corrects the second qubit of that ancilla's pair
    assert syk.table[(1, 0, 0, 0)] == P("Z{5}", n=15)
    # the mid-cat double hits need the correlated corrections
    assert syk.table[(1, 1, 0, 0)].weight() >= 2
    assert syk.table[(1, 1, 1, 0)].weight() >= 2


# --- malignant pairs --------------------------------------------------------


def test_malignant_pair_count_513():
    pc = count_malignant_pairs(ec_round("5_1_3"))
    assert not pc.estimate
    assert pc.total_pairs == 1424
    assert pc.malignant_pairs == 1109
    # regression fixture from the exhaustive enumeration; the weights are
    # all 1/15 or 1/225 so the sum is the rational 109094/225
    assert pc.coefficient == pytest.approx(109094 / 225, rel=1e-9)

    sampled = count_malignant_pairs(ec_round("5_1_3"), budget=20_000, seed=7)
    assert sampled.estimate
    assert sampled.coefficient == pytest.approx(pc.coefficient, rel=0.1)


def test_pair_count_needs_single_fault_ft():
    with pytest.raises(ValueError, match="single-fault"):
        count_malignant_pairs(naive_round())


# --- claim 1 sweep ----------------------------------------------------------


def test_claim1_sweep_small_sizes():
    report = claim1_sweep(range(3, 6))
    assert report.passed, report.summary()
    # one primitive polynomial of degree 2, two each of degrees 3 and 4
    assert report.locations == 5


# --- reporting --------------------------------------------------------------


def test_report_serialization():
    report = verify_single_fault_ft(UnflaggedDetectionRound(4))
    data = json.loads(report.to_json())
    assert data["passed"] is False
    assert data["failures"][0]["faults"][0].keys() == {"segment", "gate", "pauli"}
    text = report.summary()
    assert "FAIL" in text and "undetected_logical" in text

    ok = verify_single_fault_ft(DetectionRound(4))
    assert "PASS" in ok.summary()
    assert json.loads(ok.to_json())["failures"] == []
