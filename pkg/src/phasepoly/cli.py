"""Command-line entry point.

Exit codes: 0 ok, 1 parse error, 2 usage/validation error, 3 resource cap
exceeded, 4 verification failure.

All bit strings, on input and in dumps, are written most significant first:
the leftmost character is the highest-numbered qubit (or variable).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import transform
from .circuit import (
    Circuit,
    CircuitSyntaxError,
    CircuitValidationError,
    expand_macros,
    format_circuit,
    parse_circuit,
)
from .compiler import CompilationResult, compile_circuit
from .oracle import OracleCapError, circuit_unitary
from .polynomial import from_document, parse_var, to_document
from .verify import (
    DEFAULT_TOL,
    check_circuit,
    check_polynomial,
    random_corpus,
    run_fixture_checks,
    search_final_maps,
    write_reports,
)

EXIT_OK, EXIT_PARSE, EXIT_USAGE, EXIT_CAP, EXIT_VERIFY = 0, 1, 2, 3, 4

DEMOS = {
    "sample": "qubits 3\nz 0\ns 1\nh 1\ncz 0 1\nt 2\nh 2\n",
    "swap": "qubits 2\nswap 0 1\n",
    "toffoli": "qubits 3\ntoffoli 0 1 2\n",
}


class UsageError(Exception):
    pass


# rounding residue below this fraction of a vector's largest entry prints as 0
SNAP = 1e-12


def fmt_real(v: float, floor: float = 0.0) -> str:
    v = float(v)
    if abs(v) <= floor:
        v = 0.0
    s = format(v, ".17g")
    return "0" if s == "-0" else s


def fmt_complex(z: complex, scale: float = 1.0) -> str:
    floor = SNAP * max(scale, 1.0)
    return f"{fmt_real(z.real, floor)} {fmt_real(z.imag, floor)}"


def bitstring(index: int, width: int) -> str:
    return format(index, f"0{width}b") if width else ""


def parse_bits(text: str, width: int) -> list[int]:
    """Bit vector indexed by qubit from a most-significant-first string."""
    if len(text) != width or set(text) - {"0", "1"}:
        raise UsageError(f"expected a {width}-bit string of 0/1, got {text!r}")
    return [int(ch) for ch in reversed(text)]


def dump_vector(values, width: int) -> str:
    scale = float(np.max(np.abs(values))) if len(values) else 1.0
    return "\n".join(
        f"{bitstring(k, width)} {fmt_complex(v, scale)}" for k, v in enumerate(values)
    ) + "\n"


def _read_circuit(path: str) -> Circuit:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_circuit(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def compile_document(cr: CompilationResult) -> dict:
    doc = to_document(cr.poly)
    doc["wires"] = {
        "final": [v.name for v in cr.final_vars],
        "retired": sorted((v.name for v in cr.wires.retired), key=parse_var),
    }
    return doc


def cmd_compile(args) -> int:
    cr = compile_circuit(_read_circuit(args.circuit))
    _emit(json.dumps(compile_document(cr), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cr = compile_circuit(_read_circuit(args.circuit))
    if args.sandwich:
        s = transform.sandwich_state(cr)
    else:
        s = transform.spectrum(cr.poly, naive=args.naive)
    _emit(dump_vector(s.values, s.N), args.out)
    return EXIT_OK


def cmd_amplitude(args) -> int:
    c = _read_circuit(args.circuit)
    cr = compile_circuit(c)
    x_in = parse_bits(args.input, c.qubit_count)
    amps = transform.amplitudes(cr, x_in)
    if args.output is not None:
        y = parse_bits(args.output, c.qubit_count)
        index = sum(b << q for q, b in enumerate(y))
        _emit(fmt_complex(amps.values[index]) + "\n", args.out)
    else:
        _emit(dump_vector(amps.values, c.qubit_count), args.out)
    return EXIT_OK


def _polynomial_reports(args, circuit: Circuit):
    doc = json.loads(Path(args.polynomial).read_text())
    poly = from_document(doc)
    reference = circuit_unitary(circuit)
    final = (doc.get("wires") or {}).get("final")
    if final:
        fv = [parse_var(name) for name in final]
        return [check_polynomial(poly, fv, reference, args.tol, description=args.polynomial)]
    return [search_final_maps(poly, reference, args.tol, True, description=args.polynomial)]


def cmd_verify(args) -> int:
    if args.fixtures:
        reports = run_fixture_checks(args.fixtures_dir)
    elif args.corpus:
        seed, count = args.corpus
        corpus = random_corpus(seed, count, args.max_qubits, args.max_gates)
        reports = [
            check_circuit(c, args.tol, description=f"corpus[{i}]") for i, c in enumerate(corpus)
        ]
    elif args.circuit:
        circuit = _read_circuit(args.circuit)
        if args.polynomial:
            reports = _polynomial_reports(args, circuit)
        else:
            reports = [check_circuit(circuit, args.tol, description=args.circuit)]
    else:
        raise UsageError("verify needs a circuit file, --corpus SEED COUNT, or --fixtures")
    write_reports(reports, args.report)
    for r in reports:
        if not args.quiet or not r.passed:
            print(r.summary())
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} passed; report written to {args.report}")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_demo(args) -> int:
    if args.name not in DEMOS:
        raise UsageError(f"unknown demo {args.name!r}; choose from {', '.join(DEMOS)}")
    c = parse_circuit(DEMOS[args.name])
    cr = compile_circuit(c)
    out = ["circuit:", *("  " + line for line in format_circuit(c).splitlines())]
    expanded = expand_macros(c)
    if expanded != c:
        out.append(f"expanded ({len(expanded)} gates):")
        out.extend("  " + str(g) for g in expanded.gates)
    out.append("gate-by-gate terms:")
    out.extend(f"  {step}" for step in cr.trace)
    out.append(f"polynomial (emission order): {cr.emission_order()}")
    out.append(f"polynomial (canonical):      {cr.poly}")
    out.append(f"terms: {len(cr.poly.terms)}  constant: {cr.poly.constant}  ancillas: {cr.m}")
    out.append("wires:")
    for q, v in enumerate(cr.final_vars):
        out.append(f"  qubit {q}: input x{q} -> output {v.name}")
    report = check_circuit(c)
    out.append(
        f"verification: {'pass' if report.passed else 'FAIL'} "
        f"(max deviation {report.max_deviation:.3g}, tolerance {report.tolerance:g})"
    )
    print("\n".join(out))
    return EXIT_OK if report.passed else EXIT_VERIFY


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasepoly", description="Compile Clifford+T circuits to Z_8 phase polynomials."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="emit the polynomial interchange document")
    p.add_argument("circuit", help="circuit file, or - for stdin")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("spectrum", help="dump the generalized Walsh-Hadamard spectrum")
    p.add_argument("circuit")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--naive", action="store_true", help="direct O(4^N) evaluation")
    mode.add_argument("--sandwich", action="store_true", help="normalized H^N C' H^N output state")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("amplitude", help="amplitudes <y|C|x> for one input x")
    p.add_argument("circuit")
    p.add_argument("--input", required=True, help="input bit string, most significant first")
    p.add_argument("--output", help="print only this output entry")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_amplitude)

    p = sub.add_parser("verify", help="check compilations against the statevector oracle")
    p.add_argument("circuit", nargs="?")
    p.add_argument("--polynomial", help="check this interchange document against the circuit")
    p.add_argument("--corpus", nargs=2, type=int, metavar=("SEED", "COUNT"))
    p.add_argument("--max-qubits", type=int, default=5)
    p.add_argument("--max-gates", type=int, default=25)
    p.add_argument("--fixtures", action="store_true", help="check the bundled published polynomials")
    p.add_argument("--fixtures-dir", help="alternative fixtures directory")
    p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    p.add_argument("--report", default="verify-report.jsonl")
    p.add_argument("--quiet", "-q", action="store_true", help="only print failures")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="walk through a built-in example")
    p.add_argument("name", help=", ".join(DEMOS))
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CircuitSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (transform.TransformCapError, OracleCapError) as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (CircuitValidationError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
