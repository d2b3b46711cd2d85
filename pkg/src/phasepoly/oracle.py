"""Dense statevector simulator used as ground truth.

Deliberately shares no phase or indexing code with the compiler: gate
matrices are written out directly and applied with ``tensordot``. Qubit ``q``
is bit ``q`` (least significant first) of a basis-state index.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .circuit import Circuit, GateKind

MAX_STATE_QUBITS = 12
MAX_UNITARY_QUBITS = 6

_R = 1 / np.sqrt(2)
_W = np.exp(1j * np.pi / 4)


def _diag(*entries) -> np.ndarray:
    return np.diag(np.array(entries, dtype=complex))


def _perm(images: Sequence[int]) -> np.ndarray:
    """Permutation matrix sending basis state ``k`` to ``images[k]``."""
    mat = np.zeros((len(images), len(images)), dtype=complex)
    for k, img in enumerate(images):
        mat[img, k] = 1
    return mat


# Multi-qubit matrices index the first operand as the most significant bit.
_MATRICES = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: _diag(1, -1),
    GateKind.S: _diag(1, np.exp(1j * np.pi / 2)),
    GateKind.SDG: _diag(1, np.exp(-1j * np.pi / 2)),
    GateKind.T: _diag(1, _W),
    GateKind.TDG: _diag(1, np.conj(_W)),
    GateKind.H: _R * np.array([[1, 1], [1, -1]], dtype=complex),
    GateKind.CZ: _diag(1, 1, 1, -1),
    GateKind.CNOT: _perm([0, 1, 3, 2]),
    GateKind.SWAP: _perm([0, 2, 1, 3]),
    GateKind.CCZ: _diag(1, 1, 1, 1, 1, 1, 1, -1),
    GateKind.TOFFOLI: _perm([0, 1, 2, 3, 4, 5, 7, 6]),
}


def gate_matrix(kind: GateKind) -> np.ndarray:
    return _MATRICES[kind].copy()


class OracleCapError(ValueError):
    pass


def basis_state(n: int, bits: Sequence[int]) -> np.ndarray:
    if len(bits) != n:
        raise ValueError(f"basis bit vector has length {len(bits)}, expected {n}")
    state = np.zeros(2**n, dtype=complex)
    state[sum(int(b) << q for q, b in enumerate(bits))] = 1
    return state


def apply_matrix(state: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    k = len(qubits)
    psi = state.reshape([2] * n)
    # qubit q lives on axis n-1-q of the C-ordered tensor
    axes = [n - 1 - q for q in qubits]
    op = matrix.reshape([2] * (2 * k))
    psi = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), axes))
    # tensordot puts the k output axes first; move them back into place
    psi = np.moveaxis(psi, list(range(k)), axes)
    return psi.reshape(-1)


def simulate(c: Circuit, x_in: Sequence[int]) -> np.ndarray:
    """Apply every gate of ``c`` (macros via their defining matrices) to ``|x_in>``."""
    n = c.qubit_count
    if n > MAX_STATE_QUBITS:
        raise OracleCapError(f"{n} qubits exceeds the statevector cap of {MAX_STATE_QUBITS}")
    state = basis_state(n, x_in)
    for g in c.gates:
        state = apply_matrix(state, _MATRICES[g.kind], g.qubits, n)
    return state


def circuit_unitary(c: Circuit) -> np.ndarray:
    n = c.qubit_count
    if n > MAX_UNITARY_QUBITS:
        raise OracleCapError(f"{n} qubits exceeds the unitary cap of {MAX_UNITARY_QUBITS}")
    cols = [simulate(c, [(k >> q) & 1 for q in range(n)]) for k in range(2**n)]
    return np.stack(cols, axis=1)


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    return np.allclose(u @ u.conj().T, np.eye(u.shape[0]), atol=tol, rtol=0)
