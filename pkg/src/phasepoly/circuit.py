"""Circuit intermediate representation and the line-oriented circuit text format.

A circuit file looks like::

    # small sample
    qubits 3
    z 0
    s 1
    h 1
    cz 0 1
    t 2
    h 2

Qubits are 0-based. For ``cnot`` the first operand is the control; for
``ccz`` and ``toffoli`` the last operand is the target.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field


class GateKind(enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    H = "h"
    CZ = "cz"
    CNOT = "cnot"
    CCZ = "ccz"
    SWAP = "swap"
    TOFFOLI = "toffoli"

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def is_macro(self) -> bool:
        return self in (GateKind.SWAP, GateKind.TOFFOLI)

    @property
    def mnemonic(self) -> str:
        return self.value


_ARITY = {
    GateKind.X: 1, GateKind.Y: 1, GateKind.Z: 1, GateKind.S: 1,
    GateKind.SDG: 1, GateKind.T: 1, GateKind.TDG: 1, GateKind.H: 1,
    GateKind.CZ: 2, GateKind.CNOT: 2, GateKind.SWAP: 2,
    GateKind.CCZ: 3, GateKind.TOFFOLI: 3,
}

_BY_MNEMONIC = {k.value: k for k in GateKind}


class CircuitError(ValueError):
    """Base class for circuit-text and circuit-invariant errors."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class CircuitSyntaxError(CircuitError):
    """Malformed text: bad tokens, unknown mnemonic, wrong arity, missing header."""


class CircuitValidationError(CircuitError):
    """Well-formed text that violates an operand invariant."""


@dataclass(frozen=True)
class GateInstance:
    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != self.kind.arity:
            raise ValueError(
                f"{self.kind.mnemonic} takes {self.kind.arity} qubit(s), got {len(self.qubits)}"
            )

    def __str__(self) -> str:
        return " ".join([self.kind.mnemonic, *map(str, self.qubits)])


def gate(kind: GateKind | str, *qubits: int) -> GateInstance:
    """Shorthand constructor: ``gate("cnot", 0, 1)``."""
    if isinstance(kind, str):
        kind = _BY_MNEMONIC[kind.lower()]
    return GateInstance(kind, qubits)


@dataclass(frozen=True)
class Circuit:
    qubit_count: int
    gates: tuple[GateInstance, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def __len__(self) -> int:
        return len(self.gates)

    def append(self, *gates: GateInstance) -> "Circuit":
        return Circuit(self.qubit_count, self.gates + gates)

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind is kind)


def validate(c: Circuit) -> list[str]:
    """Return one diagnostic per violated invariant (empty list when valid)."""
    diags = []
    if c.qubit_count < 1:
        diags.append(f"qubit count must be positive, got {c.qubit_count}")
    for pos, g in enumerate(c.gates):
        for q in g.qubits:
            if not 0 <= q < c.qubit_count:
                diags.append(
                    f"gate {pos} ({g}): qubit {q} out of range for {c.qubit_count} qubit(s)"
                )
        if len(set(g.qubits)) != len(g.qubits):
            diags.append(f"gate {pos} ({g}): operands must be distinct")
    return diags


def parse_circuit(text: str) -> Circuit:
    n = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if n is None:
            if head != "qubits":
                raise CircuitSyntaxError("expected 'qubits <n>' header", lineno)
            if len(tokens) != 2:
                raise CircuitSyntaxError("header takes exactly one argument", lineno)
            n = _parse_int(tokens[1], lineno)
            if n < 1:
                raise CircuitValidationError(f"qubit count must be positive, got {n}", lineno)
            continue
        if head == "qubits":
            raise CircuitSyntaxError("duplicate 'qubits' header", lineno)
        kind = _BY_MNEMONIC.get(head)
        if kind is None:
            raise CircuitSyntaxError(f"unknown gate mnemonic {tokens[0]!r}", lineno)
        operands = [_parse_int(t, lineno) for t in tokens[1:]]
        if len(operands) != kind.arity:
            raise CircuitSyntaxError(
                f"{kind.mnemonic} takes {kind.arity} qubit(s), got {len(operands)}", lineno
            )
        for q in operands:
            if not 0 <= q < n:
                raise CircuitValidationError(
                    f"qubit {q} out of range for {n} qubit(s)", lineno
                )
        if len(set(operands)) != len(operands):
            raise CircuitValidationError(f"duplicate operand in {line!r}", lineno)
        gates.append(GateInstance(kind, tuple(operands)))
    if n is None:
        raise CircuitSyntaxError("missing 'qubits <n>' header")
    return Circuit(n, tuple(gates))


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise CircuitSyntaxError(f"expected an integer, got {token!r}", lineno) from None


def format_circuit(c: Circuit) -> str:
    """Canonical text form; ``parse_circuit(format_circuit(c)) == c``."""
    lines = [f"qubits {c.qubit_count}"]
    lines.extend(str(g) for g in c.gates)
    return "\n".join(lines) + "\n"


def toffoli_sequence(i: int, j: int, k: int) -> list[GateInstance]:
    """15-gate Clifford+T Toffoli with controls ``i``, ``j`` and target ``k``.

    This is the textbook sequence H(k); CNOT(j,k); ...; CNOT(i,j) with its
    leading H(k); CNOT(j,k) pair written as the equal operator CZ(j,k); H(k),
    so the target wire carries 12 rather than 14 gadget ancillas.
    """
    return [
        gate("cz", j, k), gate("h", k),
        gate("tdg", k), gate("cnot", i, k), gate("t", k), gate("cnot", j, k),
        gate("tdg", k), gate("cnot", i, k), gate("t", j), gate("t", k),
        gate("cnot", i, j), gate("h", k), gate("t", i), gate("tdg", j),
        gate("cnot", i, j),
    ]


def swap_sequence(i: int, j: int) -> list[GateInstance]:
    return [gate("cnot", i, j), gate("cnot", j, i), gate("cnot", i, j)]


def expand_macros(c: Circuit) -> Circuit:
    """Replace SWAP and TOFFOLI by their CNOT / Clifford+T sequences."""
    out = []
    for g in c.gates:
        if g.kind is GateKind.SWAP:
            out.extend(swap_sequence(*g.qubits))
        elif g.kind is GateKind.TOFFOLI:
            out.extend(toffoli_sequence(*g.qubits))
        else:
            out.append(g)
    return Circuit(c.qubit_count, tuple(out))
