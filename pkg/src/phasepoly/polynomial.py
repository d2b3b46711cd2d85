"""Phase polynomials f: F_2^(n+m) -> Z_8 with monomials of degree at most 3."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

MODULUS = 8
MAX_DEGREE = 3

INPUT = 0
ANCILLA = 1


class VarId(NamedTuple):
    """A polynomial variable. Sorts inputs before ancillas, then by index."""

    role: int
    index: int

    @property
    def name(self) -> str:
        return f"{'x' if self.role == INPUT else 'a'}{self.index}"

    def __repr__(self) -> str:
        return self.name


def x(i: int) -> VarId:
    return VarId(INPUT, i)


def a(k: int) -> VarId:
    return VarId(ANCILLA, k)


_VAR_RE = re.compile(r"^([xa])(\d+)$")


def parse_var(name: str) -> VarId:
    match = _VAR_RE.match(name)
    if match is None:
        raise ValueError(f"unknown variable name {name!r}")
    return VarId(INPUT if match.group(1) == "x" else ANCILLA, int(match.group(2)))


Monomial = tuple  # tuple[VarId, ...], strictly sorted, 1 to 3 entries


def monomial(*vars: VarId) -> Monomial:
    """Build a sorted monomial; repeated variables are rejected, not reduced."""
    if not 1 <= len(vars) <= MAX_DEGREE:
        raise ValueError(f"monomial degree must be 1..{MAX_DEGREE}, got {len(vars)}")
    if len(set(vars)) != len(vars):
        raise ValueError(f"repeated variable in monomial {vars}")
    return tuple(sorted(VarId(*v) for v in vars))


def _mono_key(mono: Monomial):
    return (len(mono), mono)


def _check_bounds(mono: Monomial, n: int, m: int) -> None:
    for v in mono:
        limit = n if v.role == INPUT else m
        if not 0 <= v.index < limit:
            raise ValueError(f"variable {v.name} out of bounds (inputs={n}, ancillas={m})")


@dataclass(frozen=True, eq=False)
class PhasePoly:
    n: int
    m: int = 0
    constant: int = 0
    terms: Mapping[Monomial, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "constant", self.constant % MODULUS)
        terms = {}
        for mono, coeff in self.terms.items():
            mono = monomial(*mono)
            _check_bounds(mono, self.n, self.m)
            terms[mono] = coeff % MODULUS
        object.__setattr__(self, "terms", terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhasePoly):
            return NotImplemented
        mine, theirs = canonicalize(self), canonicalize(other)
        return (
            (mine.n, mine.m, mine.constant) == (theirs.n, theirs.m, theirs.constant)
            and list(mine.terms.items()) == list(theirs.terms.items())
        )

    __hash__ = None

    @property
    def num_vars(self) -> int:
        return self.n + self.m

    def variables(self) -> list[VarId]:
        """All variables in index order: inputs then ancillas."""
        return [x(i) for i in range(self.n)] + [a(k) for k in range(self.m)]

    def position(self, v: VarId) -> int:
        """Bit position of ``v`` in an assignment vector or basis index."""
        return v.index if v.role == INPUT else self.n + v.index

    def degree(self) -> int:
        return max((len(mono) for mono in self.terms), default=0)

    def __str__(self) -> str:
        return format_terms(self.constant, self.terms.items())

    def __repr__(self) -> str:
        return f"PhasePoly(n={self.n}, m={self.m}, {self})"


def format_terms(constant: int, items: Iterable[tuple[Monomial, int]]) -> str:
    parts = [str(constant)] if constant % MODULUS else []
    for mono, coeff in items:
        body = "".join(v.name for v in mono)
        parts.append(body if coeff == 1 else f"{coeff}{body}")
    return " + ".join(parts) if parts else "0"


def zero(n: int, m: int = 0) -> PhasePoly:
    return PhasePoly(n, m)


def add_term(p: PhasePoly, mono: Sequence[VarId], coeff: int) -> PhasePoly:
    mono = monomial(*mono)
    _check_bounds(mono, p.n, p.m)
    terms = dict(p.terms)
    value = (terms.get(mono, 0) + coeff) % MODULUS
    if value:
        terms[mono] = value
    else:
        terms.pop(mono, None)
    return PhasePoly(p.n, p.m, p.constant, terms)


def add_constant(p: PhasePoly, c: int) -> PhasePoly:
    return PhasePoly(p.n, p.m, p.constant + c, p.terms)


def with_ancillas(p: PhasePoly, m: int) -> PhasePoly:
    """Same polynomial over a (larger) ancilla range."""
    return PhasePoly(p.n, m, p.constant, p.terms)


def canonicalize(p: PhasePoly) -> PhasePoly:
    """Purge zero coefficients and order terms by (degree, variables)."""
    items = sorted(
        ((mono, c) for mono, c in p.terms.items() if c % MODULUS), key=lambda t: _mono_key(t[0])
    )
    return PhasePoly(p.n, p.m, p.constant, dict(items))


def evaluate(p: PhasePoly, assignment: Sequence[int]) -> int:
    """Value of ``p`` at a bit assignment ordered inputs-then-ancillas."""
    if len(assignment) != p.num_vars:
        raise ValueError(f"assignment has length {len(assignment)}, expected {p.num_vars}")
    total = p.constant
    for mono, coeff in p.terms.items():
        if all(assignment[p.position(v)] for v in mono):
            total += coeff
    return total % MODULUS


def to_document(p: PhasePoly) -> dict:
    p = canonicalize(p)
    return {
        "inputs": p.n,
        "ancillas": p.m,
        "constant": p.constant,
        "terms": [{"vars": [v.name for v in mono], "coeff": c} for mono, c in p.terms.items()],
    }


def to_text(p: PhasePoly) -> str:
    return json.dumps(to_document(p), indent=2)


def from_document(doc: Mapping) -> PhasePoly:
    """Inverse of :func:`to_document`. Keys other than the four standard ones are ignored."""
    if not isinstance(doc, Mapping):
        raise ValueError("polynomial document must be a JSON object")
    try:
        n, m, constant, terms = doc["inputs"], doc["ancillas"], doc["constant"], doc["terms"]
    except KeyError as exc:
        raise ValueError(f"polynomial document missing key {exc.args[0]!r}") from None
    for key, value in (("inputs", n), ("ancillas", m)):
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise ValueError(f"{key!r} must be a non-negative integer")
    _check_coeff(constant, "constant")
    if not isinstance(terms, list):
        raise ValueError("'terms' must be a list")
    p = PhasePoly(n, m, constant)
    for entry in terms:
        if not isinstance(entry, Mapping) or "vars" not in entry or "coeff" not in entry:
            raise ValueError(f"malformed term {entry!r}")
        _check_coeff(entry["coeff"], "coefficient")
        mono = [parse_var(name) for name in entry["vars"]]
        p = add_term(p, mono, entry["coeff"])
    return p


def from_text(text: str) -> PhasePoly:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed polynomial document: {exc}") from None
    return from_document(doc)


def _check_coeff(value, what: str) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value < MODULUS:
        raise ValueError(f"{what} must be an integer in 0..7, got {value!r}")
