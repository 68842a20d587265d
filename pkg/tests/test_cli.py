"""End-to-end checks of the command line front end.

Every test drives ``main`` with an argv list and inspects the captured
output plus the exit code, the same path the console script takes.
"""

import subprocess
import sys

import pytest

from flagqec.builders import flagged_extraction
from flagqec.circuit import deserialize
from flagqec.cli import main
from flagqec.codes import FlagOrdering, ec_orderings
from flagqec.montecarlo import CSV_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_codes_list(capsys):
    code, out, _ = run(capsys, "codes", "list")
    assert code == 0
    assert "5_1_3" in out
    assert "nn22_6" in out
    assert "[[15,7,3]]" in out


def test_verify_ec_passes(capsys):
    code, out, _ = run(capsys, "verify", "--code", "5_1_3")
    assert code == 0
    assert "PASS" in out and "FAIL" not in out


def test_verify_detect_is_the_default_for_distance_two(capsys):
    code, out, _ = run(capsys, "verify", "--code", "nn22_4")
    assert code == 0
    assert "DetectionRound" in out


def test_verify_meas(capsys):
    code, out, _ = run(capsys, "verify", "--code", "5_1_3", "--protocol", "meas")
    assert code == 0
    assert "PASS" in out


def test_verify_prep_reports_every_target_state(capsys):
    code, out, _ = run(capsys, "verify", "--code", "nn22_4", "--protocol", "prep")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert all("PASS" in line for line in lines)
    assert lines[0].startswith("j=0:")


def test_verify_syk_covers_each_generator(capsys):
    code, out, _ = run(capsys, "verify", "--code", "5_1_3", "--protocol", "syk")
    assert code == 0
    assert len(out.strip().splitlines()) == 4


def test_verify_unknown_code_is_a_usage_error(capsys):
    code, _, err = run(capsys, "verify", "--code", "nope")
    assert code == 2
    assert "unknown code" in err


def test_verify_mismatched_protocol_is_a_usage_error(capsys):
    code, _, err = run(capsys, "verify", "--code", "7_1_3", "--protocol", "detect")
    assert code == 2
    assert "distance" in err


def test_tables_prints_the_flagged_corrections(capsys):
    code, out, _ = run(capsys, "tables", "--code", "5_1_3")
    assert code == 0
    assert "IYZXI" in out
    assert "weight-1 lookup" in out
    assert out.count("generator") == 4


def test_perm_hamming_defaults_to_the_first_primitive_poly(capsys):
    code, out, _ = run(capsys, "perm", "--hamming", "3")
    assert code == 0
    assert out.strip() == "4 5 6 7"


def test_perm_accepts_an_explicit_poly(capsys):
    code, out, _ = run(capsys, "perm", "--hamming", "4", "--poly", "0b1011")
    assert code == 0
    order = tuple(int(tok) for tok in out.split())
    assert sorted(order) == list(range(8, 16))


def test_perm_rejects_a_reducible_poly(capsys):
    code, _, err = run(capsys, "perm", "--hamming", "4", "--poly", "0b110")
    assert code == 2
    assert "primitive" in err


def test_perm_search_finds_an_order(capsys):
    code, out, _ = run(capsys, "perm", "--search", "--code", "5_1_3", "--gen", "0")
    assert code == 0
    assert sorted(int(tok) for tok in out.split()) == [1, 2, 3, 4]


def test_perm_search_without_a_target_is_a_usage_error(capsys):
    code, _, err = run(capsys, "perm", "--search")
    assert code == 2
    assert "--code" in err


def test_emit_prints_gates_in_order(capsys):
    code, out, _ = run(capsys, "emit", "--circuit", "flagged:5_1_3:0")
    assert code == 0
    assert "couple_x d1 a1" in out
    assert "-> flag" in out
    assert out.index("prep_z") < out.index("meas_z")


def test_emit_json_round_trips(capsys):
    code, out, _ = run(capsys, "emit", "--circuit", "flagged:5_1_3:0", "--json")
    assert code == 0
    five, orders = ec_orderings("5_1_3")
    built = flagged_extraction(
        FlagOrdering(five.generators[0], tuple(orders[0]))
    )
    assert deserialize(out) == built


def test_emit_unknown_circuit_is_a_usage_error(capsys):
    code, _, err = run(capsys, "emit", "--circuit", "bogus:1:2")
    assert code == 2
    assert "known forms" in err


def test_mc_writes_the_sweep_csv(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    code, out, _ = run(
        capsys,
        "mc", "--code", "5_1_3", "--p", "2e-3,1e-3", "--rounds", "2000",
        "--seed", "11", "--shards", "2", "--out", str(target),
    )
    assert code == 0
    lines = target.read_text().strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3
    assert f"wrote {target}" in out


def test_mc_without_out_prints_a_table(capsys):
    code, out, _ = run(
        capsys, "mc", "--code", "5_1_3", "--p", "2e-3", "--rounds", "1000"
    )
    assert code == 0
    assert "rate/p^2" in out


def test_mc_rejects_a_bad_probability_list(capsys):
    code, _, err = run(capsys, "mc", "--code", "5_1_3", "--p", "fish")
    assert code == 2
    assert "probability" in err


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0
    assert main([]) == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "flagqec", "perm", "--hamming", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "4 5 6 7"
