"""Generalized Walsh-Hadamard spectra over Z_8 and path-sum amplitude extraction.

Vector indices follow the polynomial's variable order: bit ``k`` of an index
is variable ``k`` (inputs first, then ancillas), least significant first.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .compiler import CompilationResult
from .polynomial import MODULUS, PhasePoly, VarId, evaluate

_C = np.sqrt(0.5)
# exact at the even powers; the odd ones carry one rounding each
ZETA8 = np.array(
    [1, _C + 1j * _C, 1j, -_C + 1j * _C, -1, -_C - 1j * _C, -1j, _C - 1j * _C],
    dtype=complex,
)

PHASE_CAP = 24
NAIVE_CAP = 14
FAST_CAP = 24
INTERNAL_CAP = 20


class TransformCapError(ValueError):
    """A problem size exceeds the configured cap."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    N: int
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != 2**self.N:
            raise ValueError(f"spectrum length {len(self.values)} != 2^{self.N}")


@dataclass(frozen=True, eq=False)
class AmplitudeVector:
    n: int
    input: tuple[int, ...]
    values: np.ndarray


def _check_cap(size: int, cap: int, what: str) -> None:
    if size > cap:
        raise TransformCapError(f"{what}: {size} variables exceeds cap {cap}")


def exponent_vector(p: PhasePoly) -> np.ndarray:
    """f(x) mod 8 for every assignment index x."""
    N = p.num_vars
    idx = np.arange(2**N, dtype=np.int64)
    exps = np.full(2**N, p.constant, dtype=np.int64)
    for mono, coeff in p.terms.items():
        mask = 0
        for v in mono:
            mask |= 1 << p.position(v)
        exps += coeff * ((idx & mask) == mask)
    return exps % MODULUS


def phase_vector(p: PhasePoly, cap: int = PHASE_CAP) -> np.ndarray:
    _check_cap(p.num_vars, cap, "phase_vector")
    return ZETA8[exponent_vector(p)]


def naive_transform(values: Sequence[complex]) -> np.ndarray:
    """sum_x values[x] (-1)^(u.x) for every u, one u at a time."""
    values = np.asarray(values, dtype=complex)
    size = len(values)
    if size < 1 or size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    _check_cap(size.bit_length() - 1, NAIVE_CAP, "naive transform")
    xs = np.arange(size, dtype=np.uint64)
    out = np.empty(size, dtype=complex)
    for u in range(size):
        parity = np.bitwise_count(xs & np.uint64(u)) & 1
        signs = 1 - 2 * parity.astype(np.int64)
        out[u] = np.sum(values * signs)
    return out


def gwht_naive(p: PhasePoly) -> Spectrum:
    """H_f(u) = sum_x zeta^f(x) (-1)^(u.x), evaluated directly in O(4^N)."""
    _check_cap(p.num_vars, NAIVE_CAP, "gwht_naive")
    return Spectrum(p.num_vars, naive_transform(phase_vector(p)))


def gwht_fast(values: Sequence[complex]) -> Spectrum:
    """In-place radix-2 butterflies, O(N 2^N)."""
    out = np.array(values, dtype=complex)
    size = len(out)
    if size < 1 or size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    N = size.bit_length() - 1
    _check_cap(N, FAST_CAP, "gwht_fast")
    half = 1
    while half < size:
        blocks = out.reshape(-1, 2, half)
        lo = blocks[:, 0, :].copy()
        hi = blocks[:, 1, :]
        blocks[:, 0, :] += hi
        blocks[:, 1, :] = lo - hi
        half *= 2
    return Spectrum(N, out)


def spectrum(p: PhasePoly, naive: bool = False) -> Spectrum:
    if naive:
        return gwht_naive(p)
    _check_cap(p.num_vars, FAST_CAP, "spectrum")
    return gwht_fast(phase_vector(p, cap=FAST_CAP))


def parseval_defect(s: Spectrum) -> float:
    expected = 4.0**s.N
    return abs(float(np.sum(np.abs(s.values) ** 2)) - expected) / expected


def sandwich_state(cr: CompilationResult) -> Spectrum:
    """Output of H^N C' H^N on |0...0>: 2^-N times the spectrum of f."""
    p = cr.poly
    _check_cap(p.num_vars, FAST_CAP, "sandwich_state")
    s = gwht_fast(phase_vector(p, cap=FAST_CAP))
    return Spectrum(s.N, s.values / 2.0**s.N)


# -- clamped path sums -------------------------------------------------------


def _restrict(p: PhasePoly, clamp: dict[VarId, int]):
    """Substitute clamped bits; return (constant, [(free vars, coeff)])."""
    constant = p.constant
    reduced = {}
    for mono, coeff in p.terms.items():
        if any(clamp.get(v, 1) == 0 for v in mono):
            continue
        free = tuple(v for v in mono if v not in clamp)
        if free:
            reduced[free] = (reduced.get(free, 0) + coeff) % MODULUS
        else:
            constant += coeff
    return constant % MODULUS, [(mono, c) for mono, c in reduced.items() if c]


def path_sum(p: PhasePoly, clamp: dict[VarId, int], open_vars: Sequence[VarId]) -> np.ndarray:
    """Sum zeta^f over every variable that is neither clamped nor open.

    Returns a tensor with one length-2 axis per entry of ``open_vars`` (in
    that order). The sum is carried out as a tensor-network contraction with
    one factor per polynomial term, so its cost follows the wiring of the
    circuit rather than 2^(free variables).
    """
    constant, reduced = _restrict(p, clamp)
    free = [v for v in p.variables() if v not in clamp]
    label = {v: i for i, v in enumerate(free)}
    if len(free) > 52:
        raise TransformCapError(f"{len(free)} free variables exceeds the contraction limit")
    operands = []
    for mono, coeff in reduced:
        k = len(mono)
        grid = np.indices([2] * k).reshape(k, -1).prod(axis=0)
        operands.append(ZETA8[(coeff * grid) % MODULUS].reshape([2] * k))
        operands.append([label[v] for v in mono])
    for v in free:
        # every free variable appears at least once so the einsum sums it
        operands.append(np.ones(2, dtype=complex))
        operands.append([label[v]])
    if not operands:
        return ZETA8[constant] * np.ones((), dtype=complex)
    out = [label[v] for v in open_vars]
    result = np.einsum(*operands, out, optimize="greedy")
    return ZETA8[constant] * np.asarray(result, dtype=complex)


def _internal_count(p: PhasePoly, input_vars, final_vars) -> int:
    return p.num_vars - len(set(input_vars) | set(final_vars))


def amplitudes(
    cr: CompilationResult, x_in: Sequence[int], cap: int = INTERNAL_CAP
) -> AmplitudeVector:
    """<y|C|x_in> for every output basis state y."""
    values = _clamped_amplitudes(cr.poly, cr.final_vars, x_in, cap)
    return AmplitudeVector(cr.n, tuple(int(b) for b in x_in), values)


def _clamped_amplitudes(p: PhasePoly, final_vars: Sequence[VarId], x_in, cap: int) -> np.ndarray:
    final_vars = list(final_vars)
    n = len(final_vars)
    if len(x_in) != n:
        raise ValueError(f"input has {len(x_in)} bits, expected {n}")
    inputs = [VarId(0, q) for q in range(n)]
    _check_cap(_internal_count(p, inputs, final_vars), cap, "amplitudes")
    clamp = {v: int(b) for v, b in zip(inputs, x_in)}
    open_vars = [v for v in dict.fromkeys(final_vars) if v not in clamp]
    tensor = path_sum(p, clamp, open_vars)
    ys = np.arange(2**n)
    y_bits = [(ys >> q) & 1 for q in range(n)]
    index = tuple(y_bits[final_vars.index(v)] for v in open_vars)
    values = tensor[index] if open_vars else np.full(2**n, tensor[()], dtype=complex)
    ok = np.ones(2**n, dtype=bool)
    for q, v in enumerate(final_vars):
        if v in clamp:
            ok &= y_bits[q] == clamp[v]
    return np.where(ok, values, 0) * 2.0 ** (-p.m / 2)


def clamped_unitary(
    p: PhasePoly, final_vars: Sequence[VarId], cap: int = INTERNAL_CAP
) -> np.ndarray:
    """Matrix U[y, x] of amplitudes extracted from ``p`` with the given output wires.

    One contraction with the inputs and outputs left open, then the columns
    are gathered; an input variable that is also an output variable forces
    the two bits to agree.
    """
    final_vars = list(final_vars)
    n = len(final_vars)
    if len(set(final_vars)) != n:
        raise ValueError("final variables must be pairwise distinct")
    inputs = [VarId(0, q) for q in range(n)]
    _check_cap(_internal_count(p, inputs, final_vars), cap, "amplitudes")
    open_vars = list(dict.fromkeys(inputs + list(final_vars)))
    tensor = path_sum(p, {}, open_vars)
    ys, xs = np.meshgrid(np.arange(2**n), np.arange(2**n), indexing="ij")
    ok = np.ones(ys.shape, dtype=bool)
    bits = {}
    for q, v in enumerate(inputs):
        bits[v] = (xs >> q) & 1
    for q, v in enumerate(final_vars):
        b = (ys >> q) & 1
        if v in bits:
            ok &= bits[v] == b
        else:
            bits[v] = b
    return np.where(ok, tensor[tuple(bits[v] for v in open_vars)], 0) * 2.0 ** (-p.m / 2)


def amplitude_matrix(cr: CompilationResult, cap: int = INTERNAL_CAP) -> np.ndarray:
    return clamped_unitary(cr.poly, cr.final_vars, cap)


def amplitudes_bruteforce(p: PhasePoly, final_vars: Sequence[VarId], x_in: Sequence[int]) -> np.ndarray:
    """Literal enumeration of the clamped path sum; reference for small cases."""
    n = len(final_vars)
    free = [v for v in p.variables() if v.role != 0 and v not in final_vars]
    out = np.zeros(2**n, dtype=complex)
    assignment = [0] * p.num_vars
    for y in range(2**n):
        fixed = {VarId(0, q): int(x_in[q]) for q in range(n)}
        clash = False
        for q, v in enumerate(final_vars):
            bit = (y >> q) & 1
            if fixed.get(v, bit) != bit:
                clash = True
            fixed[v] = bit
        if clash:
            continue
        total = 0j
        for k in range(2 ** len(free)):
            for v, bit in fixed.items():
                assignment[p.position(v)] = bit
            for j, v in enumerate(free):
                assignment[p.position(v)] = (k >> j) & 1
            total += ZETA8[evaluate(p, assignment)]
        out[y] = total * 2.0 ** (-p.m / 2)
    return out



def phase_tensor(p: PhasePoly, cap: int = PHASE_CAP) -> np.ndarray:
    """Phase vector reshaped so variable position k sits on axis N-1-k."""
    return phase_vector(p, cap).reshape([2] * p.num_vars)


def clamped_unitary_dense(
    p: PhasePoly, final_vars: Sequence[VarId], phases: np.ndarray | None = None
) -> np.ndarray:
    """Same matrix as :func:`clamped_unitary`, by summing the full phase tensor.

    Cheap to repeat for many ``final_vars`` once ``phases`` is precomputed,
    which is how candidate output-wire maps are searched.
    """
    final_vars = list(final_vars)
    n = len(final_vars)
    if len(set(final_vars)) != n:
        raise ValueError("final variables must be pairwise distinct")
    if phases is None:
        phases = phase_tensor(p)
    N = p.num_vars
    inputs = [VarId(0, q) for q in range(n)]
    kept = sorted({N - 1 - p.position(v) for v in inputs + final_vars})
    summed = tuple(ax for ax in range(N) if ax not in kept)
    reduced = phases.sum(axis=summed) if summed else phases
    ys, xs = np.meshgrid(np.arange(2**n), np.arange(2**n), indexing="ij")
    ok = np.ones(ys.shape, dtype=bool)
    bits = {}
    for q, v in enumerate(inputs):
        bits[N - 1 - p.position(v)] = (xs >> q) & 1
    for q, v in enumerate(final_vars):
        ax = N - 1 - p.position(v)
        b = (ys >> q) & 1
        if ax in bits:
            ok &= bits[ax] == b
        else:
            bits[ax] = b
    return np.where(ok, reduced[tuple(bits[ax] for ax in kept)], 0) * 2.0 ** (-p.m / 2)
