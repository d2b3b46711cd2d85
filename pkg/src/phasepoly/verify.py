"""Equivalence checks between compiled polynomials and the statevector oracle."""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, GateInstance, GateKind, expand_macros, format_circuit, parse_circuit
from .compiler import GadgetState, apply_gate, compile_circuit
from .oracle import circuit_unitary
from .polynomial import MODULUS, PhasePoly, VarId, a, add_term, from_text, x
from .transform import (
    INTERNAL_CAP,
    NAIVE_CAP,
    TransformCapError,
    amplitude_matrix,
    clamped_unitary,
    clamped_unitary_dense,
    parseval_defect,
    phase_tensor,
    spectrum,
)

DEFAULT_TOL = 1e-9
FIXTURE_TOL = 1e-6
# dense phase tensors up to this many variables are used for final-map search
DENSE_SEARCH_CAP = 20


@dataclass
class VerifyReport:
    description: str
    n: int
    m: int
    per_input_deviation: list[float]
    max_deviation: float
    passed: bool
    parseval_defect: float | None
    elapsed_s: float
    tolerance: float = DEFAULT_TOL
    error: str | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), default=_json_default)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        line = f"{verdict} {self.description}: n={self.n} m={self.m} max_dev={self.max_deviation:.3g}"
        if self.error:
            line += f" ({self.error})"
        return line


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _deviations(got: np.ndarray, want: np.ndarray) -> list[float]:
    return [float(d) for d in np.abs(got - want).max(axis=0)]


def _failed(description: str, n: int, m: int, tol: float, start: float, error: str) -> VerifyReport:
    return VerifyReport(
        description, n, m, [], float("inf"), False, None, time.perf_counter() - start, tol, error
    )


def check_circuit(c: Circuit, tol: float = DEFAULT_TOL, description: str | None = None) -> VerifyReport:
    """Compile ``c`` and compare every extracted column with the oracle."""
    start = time.perf_counter()
    description = description or format_circuit(c).strip().replace("\n", "; ")
    cr = compile_circuit(c)
    try:
        got = amplitude_matrix(cr)
        want = circuit_unitary(c)
    except (TransformCapError, ValueError) as exc:
        return _failed(description, cr.n, cr.m, tol, start, str(exc))
    per_input = _deviations(got, want)
    worst = max(per_input)
    defect = None
    if cr.poly.num_vars <= NAIVE_CAP:
        defect = parseval_defect(spectrum(cr.poly))
    return VerifyReport(
        description, cr.n, cr.m, per_input, worst, worst <= tol, defect,
        time.perf_counter() - start, tol,
    )


def check_final_map(p: PhasePoly, final_vars: Sequence[VarId]) -> None:
    if len(set(final_vars)) != len(final_vars):
        raise ValueError("final variables must be pairwise distinct")
    present = set(p.variables())
    for v in final_vars:
        if v not in present:
            raise ValueError(f"final variable {v.name} is not a variable of the polynomial")


def _fit_phase(got: np.ndarray, reference: np.ndarray) -> complex:
    k = np.unravel_index(np.argmax(np.abs(reference)), reference.shape)
    ratio = got[k] / reference[k]
    return ratio / abs(ratio) if abs(ratio) > 1e-12 else 1.0


def _compare(got, reference, up_to_global_phase):
    phase = _fit_phase(got, reference) if up_to_global_phase else 1.0
    return _deviations(got, phase * reference), complex(phase)


def check_polynomial(
    p: PhasePoly,
    final_vars: Sequence[VarId],
    reference: np.ndarray,
    tol: float = DEFAULT_TOL,
    up_to_global_phase: bool = False,
    description: str = "polynomial",
) -> VerifyReport:
    """Extract amplitudes from ``p`` with the given output wires and compare to ``reference``."""
    start = time.perf_counter()
    final_vars = list(final_vars)
    check_final_map(p, final_vars)
    if reference.shape != (2 ** len(final_vars),) * 2:
        raise ValueError(
            f"reference shape {reference.shape} does not match {len(final_vars)} output wire(s)"
        )
    if p.n != len(final_vars):
        raise ValueError(f"polynomial has {p.n} inputs but {len(final_vars)} output wires")
    try:
        got = clamped_unitary(p, final_vars)
    except TransformCapError as exc:
        return _failed(description, p.n, p.m, tol, start, str(exc))
    per_input, phase = _compare(got, reference, up_to_global_phase)
    worst = max(per_input)
    details = {"final_vars": [v.name for v in final_vars]}
    if up_to_global_phase:
        details["global_phase"] = [phase.real, phase.imag]
    return VerifyReport(
        description, p.n, p.m, per_input, worst, worst <= tol, None,
        time.perf_counter() - start, tol, details=details,
    )


def search_final_maps(
    p: PhasePoly,
    reference: np.ndarray,
    tol: float = FIXTURE_TOL,
    up_to_global_phase: bool = True,
    description: str = "fixture",
) -> VerifyReport:
    """Try every valid output-wire assignment; report the best and all passing ones."""
    start = time.perf_counter()
    n = p.n
    if reference.shape != (2**n, 2**n):
        raise ValueError(f"reference shape {reference.shape} does not match {n} inputs")
    dense = p.num_vars <= DENSE_SEARCH_CAP
    phases = phase_tensor(p, cap=DENSE_SEARCH_CAP) if dense else None
    best = None
    passing = []
    tested = 0
    for fv in itertools.permutations(p.variables(), n):
        tested += 1
        if dense:
            got = clamped_unitary_dense(p, fv, phases)
        else:
            try:
                got = clamped_unitary(p, fv)
            except TransformCapError:
                continue
        per_input, phase = _compare(got, reference, up_to_global_phase)
        worst = max(per_input)
        if worst <= tol:
            passing.append([v.name for v in fv])
        if best is None or worst < best[0]:
            best = (worst, per_input, fv, phase)
    if best is None:
        return _failed(description, p.n, p.m, tol, start, "no candidate map within caps")
    worst, per_input, fv, phase = best
    details = {
        "final_vars": [v.name for v in fv],
        "global_phase": [phase.real, phase.imag],
        "candidates_tested": tested,
        "passing_maps": passing,
        "ambiguous": len(passing) > 1,
    }
    return VerifyReport(
        description, p.n, p.m, per_input, worst, worst <= tol, None,
        time.perf_counter() - start, tol, details=details,
    )


# -- published fixtures---------------------------------------------------------


def fixtures_dir() -> Path:
    return Path(str(resources.files("phasepoly") / "fixtures"))


def run_fixture_checks(directory: Path | str | None = None) -> list[VerifyReport]:
    """Run every entry of ``manifest.json`` in the fixtures directory.

    ``compile`` entries demand that compiling the circuit reproduces the
    stored polynomial exactly and that the compilation matches the oracle.
    ``search`` entries check a hand-transcribed polynomial against the
    circuit's oracle unitary over all output-wire maps.
    """
    directory = Path(directory) if directory is not None else fixtures_dir()
    manifest = json.loads((directory / "manifest.json").read_text())
    reports = []
    for entry in manifest:
        poly = from_text((directory / entry["document"]).read_text())
        circuit = parse_circuit(entry["circuit"])
        name = entry["name"]
        if entry["check"] == "compile":
            report = check_circuit(circuit, DEFAULT_TOL, description=name)
            compiled = compile_circuit(circuit).poly
            report.details["polynomial"] = str(compiled)
            report.details["expected"] = str(poly)
            report.details["exact_match"] = compiled == poly
            report.passed = report.passed and compiled == poly
        elif entry["check"] == "search":
            report = search_final_maps(
                poly, circuit_unitary(circuit), FIXTURE_TOL, True, description=name
            )
            report.details["polynomial"] = str(poly)
        else:
            raise ValueError(f"unknown fixture check {entry['check']!r}")
        report.details["source"] = entry.get("source", "")
        reports.append(report)
    return reports


def write_reports(reports: Iterable[VerifyReport], path: Path | str) -> None:
    with open(path, "w") as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")


# -- random inputs -----------------------------------------------------------

_CORPUS_KINDS = list(GateKind)


def _internal_vars(state: GadgetState) -> int:
    touched = sum(1 for v in state.wires.current if v.role != 0)
    return state.wires.next_ancilla - touched


def random_circuit(
    rng: np.random.Generator, max_qubits: int, max_gates: int, max_internal: int = INTERNAL_CAP
) -> Circuit:
    """One random circuit; stops early rather than exceed ``max_internal``."""
    n = int(rng.integers(1, max_qubits + 1))
    kinds = [k for k in _CORPUS_KINDS if k.arity <= n]
    target = int(rng.integers(1, max_gates + 1))
    gates: list[GateInstance] = []
    state = GadgetState.initial(n)
    for _ in range(target):
        kind = kinds[int(rng.integers(len(kinds)))]
        qubits = tuple(int(q) for q in rng.permutation(n)[: kind.arity])
        g = GateInstance(kind, qubits)
        trial = state
        for sub in expand_macros(Circuit(n, (g,))).gates:
            trial = apply_gate(trial, sub)
        if _internal_vars(trial) > max_internal:
            break
        gates.append(g)
        state = trial
    return Circuit(n, tuple(gates))


def random_corpus(
    seed: int, count: int, max_qubits: int = 5, max_gates: int = 25,
    max_internal: int = INTERNAL_CAP,
) -> list[Circuit]:
    if min(count, max_qubits, max_gates) < 1:
        raise ValueError("count, max_qubits and max_gates must be positive")
    rng = np.random.default_rng(seed)
    return [random_circuit(rng, max_qubits, max_gates, max_internal) for _ in range(count)]


def random_polynomial(
    rng: np.random.Generator, n: int, m: int, terms: int | None = None
) -> PhasePoly:
    """Random phase polynomial with arbitrary Z_8 coefficients and degree <= 3."""
    vars_ = [x(i) for i in range(n)] + [a(k) for k in range(m)]
    p = PhasePoly(n, m, int(rng.integers(MODULUS)))
    if terms is None:
        terms = int(rng.integers(0, 3 * len(vars_) + 1))
    for _ in range(terms):
        deg = int(rng.integers(1, min(3, len(vars_)) + 1))
        picks = rng.choice(len(vars_), size=deg, replace=False)
        p = add_term(p, [vars_[i] for i in picks], int(rng.integers(1, MODULUS)))
    return p
