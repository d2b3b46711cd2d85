"""Fold a circuit into a Z_8 phase polynomial using Hadamard gadgets.

Diagonal gates add terms on the current variable of each wire. A Hadamard
allocates a fresh ancilla ``a``, adds ``4 * v * a`` and moves the wire onto
``a``; the old variable is retired and gets summed over during amplitude
extraction. X, Y and CNOT are compiled through their H/Z/CZ decompositions.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import Circuit, CircuitValidationError, GateInstance, GateKind, expand_macros, validate
from .polynomial import MODULUS, Monomial, PhasePoly, VarId, a, canonicalize, format_terms, monomial, x

# linear coefficient emitted by each single-qubit phase gate
PHASE_COEFF = {
    GateKind.Z: 4,
    GateKind.S: 2,
    GateKind.T: 1,
    GateKind.SDG: 6,
    GateKind.TDG: 7,
}

# Y = -i * Z H Z H; -i = zeta_8^6
Y_CONSTANT = 6


@dataclass(frozen=True)
class WireMap:
    current: tuple[VarId, ...]
    next_ancilla: int = 0
    retired: frozenset = frozenset()

    @classmethod
    def identity(cls, n: int) -> "WireMap":
        return cls(tuple(x(q) for q in range(n)))

    @property
    def n(self) -> int:
        return len(self.current)

    def input_var(self, q: int) -> VarId:
        return x(q)

    def final_var(self, q: int) -> VarId:
        return self.current[q]


@dataclass(frozen=True)
class TraceStep:
    gate: GateInstance
    terms: tuple[tuple[Monomial, int], ...]
    constant: int = 0

    def __str__(self) -> str:
        return f"{self.gate}: {format_terms(self.constant, self.terms)}"


@dataclass(frozen=True)
class GadgetState:
    terms: dict
    constant: int
    wires: WireMap
    trace: tuple[TraceStep, ...] = ()

    @classmethod
    def initial(cls, n: int) -> "GadgetState":
        return cls({}, 0, WireMap.identity(n))


@dataclass(frozen=True)
class CompilationResult:
    poly: PhasePoly
    wires: WireMap
    n: int
    m: int
    trace: tuple[TraceStep, ...] = field(default=(), compare=False)

    @property
    def final_vars(self) -> list[VarId]:
        return list(self.wires.current)

    def emission_order(self) -> str:
        """Terms in the order the gates produced them (before canonical sorting)."""
        items = [item for step in self.trace for item in step.terms]
        constant = sum(step.constant for step in self.trace) % MODULUS
        return format_terms(constant, items)


class _Emitter:
    """Mutable scratch used inside a single apply_gate call."""

    def __init__(self, state: GadgetState):
        self.terms = dict(state.terms)
        self.constant = state.constant
        self.current = list(state.wires.current)
        self.next_ancilla = state.wires.next_ancilla
        self.retired = set(state.wires.retired)
        self.emitted: list[tuple[Monomial, int]] = []
        self.emitted_constant = 0

    def add(self, coeff: int, *vars: VarId) -> None:
        mono = monomial(*vars)
        value = (self.terms.get(mono, 0) + coeff) % MODULUS
        if value:
            self.terms[mono] = value
        else:
            self.terms.pop(mono, None)
        self.emitted.append((mono, coeff % MODULUS))

    def add_constant(self, c: int) -> None:
        self.constant = (self.constant + c) % MODULUS
        self.emitted_constant = (self.emitted_constant + c) % MODULUS

    def phase(self, kind: GateKind, q: int) -> None:
        self.add(PHASE_COEFF[kind], self.current[q])

    def cz(self, i: int, j: int) -> None:
        self.add(4, self.current[i], self.current[j])

    def hadamard(self, q: int) -> None:
        anc = a(self.next_ancilla)
        self.next_ancilla += 1
        self.add(4, self.current[q], anc)
        self.retired.add(self.current[q])
        self.current[q] = anc

    def state(self, g: GateInstance, trace) -> GadgetState:
        wires = WireMap(tuple(self.current), self.next_ancilla, frozenset(self.retired))
        step = TraceStep(g, tuple(self.emitted), self.emitted_constant)
        return GadgetState(self.terms, self.constant, wires, trace + (step,))


def apply_gate(state: GadgetState, g: GateInstance) -> GadgetState:
    """Emit the terms for one macro-free gate and advance the wire map."""
    if g.kind.is_macro:
        raise ValueError(f"macro gate {g.kind.mnemonic} must be expanded before compilation")
    n = state.wires.n
    if any(not 0 <= q < n for q in g.qubits) or len(set(g.qubits)) != len(g.qubits):
        raise CircuitValidationError(f"invalid operands for {n}-qubit state: {g}")

    e = _Emitter(state)
    kind, qs = g.kind, g.qubits
    if kind in PHASE_COEFF:
        e.phase(kind, qs[0])
    elif kind is GateKind.CZ:
        e.cz(*qs)
    elif kind is GateKind.CCZ:
        e.add(4, *(e.current[q] for q in qs))
    elif kind is GateKind.H:
        e.hadamard(qs[0])
    elif kind is GateKind.X:
        q = qs[0]
        e.hadamard(q)
        e.phase(GateKind.Z, q)
        e.hadamard(q)
    elif kind is GateKind.Y:
        q = qs[0]
        for _ in range(2):
            e.hadamard(q)
            e.phase(GateKind.Z, q)
        e.add_constant(Y_CONSTANT)
    elif kind is GateKind.CNOT:
        control, target = qs
        e.hadamard(target)
        e.cz(control, target)
        e.hadamard(target)
    else:  # pragma: no cover - every non-macro kind is handled above
        raise ValueError(f"no rule for {kind}")
    return e.state(g, state.trace)


def compile_circuit(c: Circuit) -> CompilationResult:
    diags = validate(c)
    if diags:
        raise CircuitValidationError("; ".join(diags))
    c = expand_macros(c)
    state = GadgetState.initial(c.qubit_count)
    for g in c.gates:
        state = apply_gate(state, g)
    m = state.wires.next_ancilla
    poly = canonicalize(PhasePoly(c.qubit_count, m, state.constant, state.terms))
    return CompilationResult(poly, state.wires, c.qubit_count, m, state.trace)


def expected_ancillas(c: Circuit) -> int:
    """Gadget count predicted from gate counts of the macro-expanded circuit."""
    c = expand_macros(c)
    return c.count(GateKind.H) + 2 * (
        c.count(GateKind.X) + c.count(GateKind.Y) + c.count(GateKind.CNOT)
    )
