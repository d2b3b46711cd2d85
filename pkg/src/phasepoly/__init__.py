"""Compile Clifford+T quantum circuits into phase polynomials over Z_8.

The compiled polynomial's generalized Walsh-Hadamard spectrum and its
clamped path sums reproduce the circuit's amplitudes; every compilation can
be checked against an independent dense statevector simulator.
"""
from .circuit import Circuit, GateInstance, GateKind, expand_macros, format_circuit, gate, parse_circuit, validate
from .compiler import CompilationResult, WireMap, apply_gate, compile_circuit
from .polynomial import PhasePoly, VarId, add_term, canonicalize, evaluate, from_text, to_text
from .transform import amplitudes, gwht_fast, gwht_naive, parseval_defect, phase_vector, sandwich_state
from .verify import VerifyReport, check_circuit, check_polynomial, random_corpus

__version__ = "0.1.0"
