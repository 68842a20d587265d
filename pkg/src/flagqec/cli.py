"""Command line front end.

Each subcommand is a thin wrapper over one library layer: ``codes``
lists the built-in catalog, ``verify`` replays every single fault
through a protocol and reports PASS or FAIL per subject, ``tables``
prints the decoder tables a round would use, ``perm`` produces coupling
orders (closed form for Hamming codes, search otherwise), ``emit``
prints a named circuit, and ``mc`` runs memory experiments.

Exit status is 0 on success, 1 when a verification or search comes back
negative, and 2 for usage errors (unknown codes or circuits, malformed
arguments, protocols that do not apply to the chosen code).
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import gf2poly
from .builders import (
    flagged_extraction,
    nn22_state_logicals,
    prep_0_1573,
    prep_nn22,
    prep_plus_513,
    shor_cat_extraction,
    syk_half_cat_extraction,
    unflagged_extraction,
)
from .circuit import Circuit, serialize
from .codes import (
    FlagOrdering,
    catalog,
    claim1_ordering,
    ec_orderings,
    get_code,
    search_flag_ordering,
)
from .montecarlo import METHODS, RunConfig, sweep, write_csv
from .protocol import (
    DetectionRound,
    ECRound,
    LogicalXMeasurement513,
    build_weight1_decoder_table,
)
from .sim import NoiseModel
from .verify import (
    verify_prep_ft,
    verify_single_fault_ft,
    verify_syk_extraction,
)

PROTOCOLS = ("ec", "detect", "meas", "prep", "syk")

EMIT_FORMS = (
    "prep_plus_513",
    "prep_0_1573",
    "prep_nn22:N:J",
    "flagged:CODE:G",
    "unflagged:CODE:G",
    "shor_cat:CODE:G",
    "syk:CODE:G",
)


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (KeyError, ValueError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flagqec",
        description="flag-qubit syndrome extraction: build, check, benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codes", help="list the built-in codes")
    p.add_argument("action", choices=("list",))
    p.set_defaults(func=_cmd_codes)

    p = sub.add_parser(
        "verify", help="replay every single fault through a protocol"
    )
    p.add_argument("--code", required=True, metavar="CODE")
    p.add_argument(
        "--protocol",
        choices=PROTOCOLS,
        help="defaults to ec for distance-3 codes, detect for distance-2",
    )
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("tables", help="print the decoder tables for a code")
    p.add_argument("--code", required=True, metavar="CODE")
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser(
        "perm", help="coupling orders, closed-form or searched"
    )
    p.add_argument("--hamming", type=int, metavar="R")
    p.add_argument(
        "--poly",
        type=_poly_arg,
        help="field polynomial as an integer bit mask (0b1011, 11, 0xb)",
    )
    p.add_argument("--search", action="store_true")
    p.add_argument("--code", metavar="CODE")
    p.add_argument("--gen", type=int, metavar="G")
    p.set_defaults(func=_cmd_perm)

    p = sub.add_parser("emit", help="print a named circuit")
    p.add_argument("--circuit", required=True, metavar="NAME")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_emit)

    p = sub.add_parser("mc", help="Monte Carlo memory experiments")
    p.add_argument("--code", required=True, metavar="CODE")
    p.add_argument("--method", choices=METHODS, default="two-qubit-flagged")
    p.add_argument("--p", required=True, type=_p_list_arg, metavar="P1,P2,...")
    p.add_argument("--rounds", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--out", metavar="FILE.csv")
    p.set_defaults(func=_cmd_mc)

    return parser


def _poly_arg(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _p_list_arg(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(token) for token in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad probability list {text!r}"
        ) from None
    for value in values:
        if not 0.0 <= value < 1.0:
            raise argparse.ArgumentTypeError(f"p={value} outside [0, 1)")
    return values


def _cmd_codes(args: argparse.Namespace) -> int:
    for code in catalog():
        w = max(g.weight() for g in code.generators)
        kind = "css" if code.is_css else "non-css"
        print(
            f"{code.name:<8} [[{code.n},{code.k},{code.d}]]"
            f"  generators {len(code.generators)}  max weight {w}  {kind}"
        )
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    code = get_code(args.code)
    protocol = args.protocol or ("ec" if code.d == 3 else "detect")
    failed = False
    for label, report in _verify_reports(args.code, protocol):
        line = report.summary()
        if label:
            line = f"{label}: {line}"
        print(line)
        failed = failed or not report.passed
    return 1 if failed else 0


def _verify_reports(token: str, protocol: str):
    code = get_code(token)
    if protocol == "ec":
        ec_code, orders = ec_orderings(token)
        yield "", verify_single_fault_ft(ECRound(ec_code, orders))
    elif protocol == "detect":
        if code.d != 2:
            raise ValueError(
                f"{code.name} has distance {code.d}; detect applies to the"
                " distance-2 blocks"
            )
        yield "", verify_single_fault_ft(DetectionRound(code.n))
    elif protocol == "meas":
        if code.name != "5_1_3":
            raise ValueError(
                "the logical measurement gadget exists only for 5_1_3"
            )
        yield "", verify_single_fault_ft(LogicalXMeasurement513())
    elif protocol == "prep":
        yield from _prep_reports(code)
    else:
        for i, gen in enumerate(code.generators):
            yield f"g{i}", verify_syk_extraction(gen, code)


def _prep_reports(code):
    if code.name == "5_1_3":
        circuit = prep_plus_513()
        yield "", verify_prep_ft(circuit, code, (code.logical_x[0],))
    elif code.name == "15_7_3":
        circuit = prep_0_1573()
        yield "", verify_prep_ft(circuit, code, tuple(code.logical_z))
    elif code.name.startswith("nn22_"):
        for j in range(code.n - 1):
            circuit = prep_nn22(code.n, j)
            logicals = nn22_state_logicals(code.n, j)
            yield f"j={j}", verify_prep_ft(circuit, code, logicals)
    else:
        raise ValueError(f"no preparation circuit for {code.name}")


def _cmd_tables(args: argparse.Namespace) -> int:
    code, orders = ec_orderings(args.code)
    ec = ECRound(code, orders)
    w1 = build_weight1_decoder_table(code)
    print(f"{code.name} weight-1 lookup (syndrome -> correction)")
    for bits, correction in sorted(w1.entries.items()):
        print(f"  {_bits(bits)}  {correction}")
    for i in sorted(ec.tables):
        table = ec.tables[i]
        order = ec.orderings[i].order
        keys = " ".join(f"s{j + 1}" for j in table.key_indices)
        print()
        print(
            f"generator {i}: {code.generators[i]}"
            f"  order {' '.join(map(str, order))}"
        )
        print(f"  flagged lookup ({keys} -> correction)")
        for bits, correction in sorted(table.entries.items()):
            print(f"  {_bits(bits)}  {correction}")
    return 0


def _bits(bits: tuple[int, ...]) -> str:
    return "".join(map(str, bits))


def _cmd_perm(args: argparse.Namespace) -> int:
    if args.search:
        if args.code is None or args.gen is None:
            raise ValueError("--search needs --code and --gen")
        code = get_code(args.code)
        _check_gen_index(code, args.gen)
        found = search_flag_ordering(code, code.generators[args.gen])
        if found is None:
            print("no distinguishing order found")
            return 1
        print(" ".join(map(str, found.order)))
        return 0
    if args.hamming is None:
        raise ValueError("need either --hamming R or --search --code C --gen G")
    poly = args.poly
    if poly is None:
        poly = gf2poly.primitive_polys(args.hamming - 1)[0]
    ordering = claim1_ordering(args.hamming, poly)
    print(" ".join(map(str, ordering.order)))
    return 0


def _check_gen_index(code, index: int) -> None:
    if not 0 <= index < len(code.generators):
        raise ValueError(
            f"--gen must be 0..{len(code.generators) - 1} for {code.name}"
        )


def _cmd_emit(args: argparse.Namespace) -> int:
    circuit = _named_circuit(args.circuit)
    if args.json:
        print(serialize(circuit))
    else:
        _print_circuit(circuit)
    return 0


def _named_circuit(name: str) -> Circuit:
    if name == "prep_plus_513":
        return prep_plus_513()
    if name == "prep_0_1573":
        return prep_0_1573()
    head, _, rest = name.partition(":")
    parts = rest.split(":") if rest else []
    if head == "prep_nn22" and len(parts) == 2:
        return prep_nn22(int(parts[0]), int(parts[1]))
    if head in ("flagged", "unflagged") and len(parts) == 2:
        code, orders = ec_orderings(parts[0])
        index = int(parts[1])
        _check_gen_index(code, index)
        ordering = FlagOrdering(
            code.generators[index], tuple(orders[index]), css_mode=code.is_css
        )
        build = flagged_extraction if head == "flagged" else unflagged_extraction
        return build(ordering)
    if head in ("shor_cat", "syk") and len(parts) == 2:
        code = get_code(parts[0])
        index = int(parts[1])
        _check_gen_index(code, index)
        gen = code.generators[index]
        if head == "shor_cat":
            return shor_cat_extraction(gen)
        return syk_half_cat_extraction(gen)
    raise KeyError(
        f"unknown circuit {name!r}; known forms: {', '.join(EMIT_FORMS)}"
    )


def _print_circuit(circuit: Circuit) -> None:
    by_role: dict[str, list[str]] = {}
    for qubit in circuit.qubits:
        by_role.setdefault(qubit.role, []).append(qubit.id)
    print(
        "qubits: "
        + "  ".join(f"{role} {' '.join(ids)}" for role, ids in by_role.items())
    )
    for i, gate in enumerate(circuit.gates):
        line = f"{i:3d}  {gate.op:<8} {' '.join(gate.args)}"
        if gate.label is not None:
            line += f"  -> {gate.label}"
        print(line)
    if circuit.accept:
        print(
            "accept: "
            + "  ".join(f"{label}={bit}" for label, bit in circuit.accept)
        )


def _cmd_mc(args: argparse.Namespace) -> int:
    get_code(args.code)
    template = RunConfig(
        code=args.code,
        method=args.method,
        noise=NoiseModel.uniform(args.p[0]),
        rounds=args.rounds,
        seed=args.seed,
        shards=args.shards,
    )
    stats = sweep(template, args.p)
    print(
        f"{'code':<10} {'method':<18} {'p':>10} {'rounds':>10}"
        f" {'failures':>8} {'rate':>12} {'rate/p^2':>10}"
    )
    for entry in stats:
        cfg = entry.config
        p2 = cfg.noise.p2
        ratio = f"{entry.rate / p2 ** 2:>10.1f}" if p2 else f"{'':>10}"
        print(
            f"{cfg.code:<10} {cfg.method:<18} {p2:>10.3g} {entry.rounds:>10d}"
            f" {entry.failures:>8d} {entry.rate:>12.4e} {ratio}"
        )
    if args.out:
        write_csv(stats, args.out)
        print(f"wrote {args.out}")
    return 0
