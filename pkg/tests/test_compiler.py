import numpy as np
import pytest

from phasepoly.circuit import Circuit, CircuitValidationError, GateKind, expand_macros, gate, parse_circuit
from phasepoly.compiler import GadgetState, apply_gate, compile_circuit, expected_ancillas
from phasepoly.polynomial import a, x
from phasepoly.transform import amplitude_matrix
from phasepoly.verify import random_corpus


def terms(cr):
    return dict(cr.poly.terms)


def compile_text(text):
    return compile_circuit(parse_circuit(text))


def test_z_rule():
    cr = compile_text("qubits 1\nz 0")
    assert terms(cr) == {(x(0),): 4} and cr.m == 0


def test_h_rule_gadget():
    cr = compile_text("qubits 1\nh 0")
    assert terms(cr) == {(x(0), a(0)): 4}
    assert cr.wires.current == (a(0),)
    assert cr.wires.retired == {x(0)}
    assert cr.m == 1 and cr.poly.m == 1


def test_x_rule():
    cr = compile_text("qubits 1\nx 0")
    assert terms(cr) == {(x(0), a(0)): 4, (a(0),): 4, (a(0), a(1)): 4}
    assert cr.m == 2 and cr.final_vars == [a(1)]


def test_y_rule():
    cr = compile_text("qubits 1\ny 0")
    assert cr.poly.constant == 6
    assert terms(cr) == {(x(0), a(0)): 4, (a(0),): 4, (a(0), a(1)): 4, (a(1),): 4}
    assert cr.m == 2


def test_cnot_rule():
    cr = compile_text("qubits 2\ncnot 0 1")
    assert terms(cr) == {(x(1), a(0)): 4, (x(0), a(0)): 4, (a(0), a(1)): 4}
    assert cr.final_vars == [x(0), a(1)]


@pytest.mark.parametrize("mnemonic, coeff", [("s", 2), ("t", 1), ("sdg", 6), ("tdg", 7)])
def test_phase_rules(mnemonic, coeff):
    assert terms(compile_text(f"qubits 1\n{mnemonic} 0")) == {(x(0),): coeff}


def test_inverse_phases_cancel():
    assert terms(compile_text("qubits 1\ns 0\nsdg 0\nt 0\ntdg 0")) == {}


def test_cz_and_ccz_rules():
    assert terms(compile_text("qubits 2\ncz 1 0")) == {(x(0), x(1)): 4}
    assert terms(compile_text("qubits 3\nccz 0 1 2")) == {(x(0), x(1), x(2)): 4}


def test_sample(sample):
    cr = compile_circuit(sample)
    expected = {
        (x(0),): 4, (x(1),): 2, (x(1), a(0)): 4, (x(0), a(0)): 4, (x(2),): 1, (x(2), a(1)): 4,
    }
    assert terms(cr) == expected and cr.poly.constant == 0 and cr.m == 2
    assert cr.emission_order() == "4x0 + 2x1 + 4x1a0 + 4x0a0 + x2 + 4x2a1"


def test_empty_circuit():
    cr = compile_circuit(Circuit(3))
    assert terms(cr) == {} and cr.m == 0
    assert cr.final_vars == [x(0), x(1), x(2)]


def test_swap_shape():
    cr = compile_text("qubits 2\nswap 0 1")
    assert cr.m == 6
    assert len(cr.poly.terms) == 9
    assert all(len(mono) == 2 and c == 4 for mono, c in cr.poly.terms.items())


def test_toffoli_ancillas_and_cz_term():
    cr = compile_text("qubits 3\ntoffoli 0 1 2")
    assert cr.m == 12
    assert cr.poly.terms[(x(1), x(2))] == 4


def test_apply_gate_rejects_macros_and_bad_operands():
    state = GadgetState.initial(2)
    with pytest.raises(ValueError):
        apply_gate(state, gate("swap", 0, 1))
    with pytest.raises(CircuitValidationError):
        apply_gate(state, gate("h", 3))


def test_apply_gate_is_pure():
    state = GadgetState.initial(1)
    after = apply_gate(state, gate("h", 0))
    assert state.terms == {} and state.wires.next_ancilla == 0
    assert after.wires.next_ancilla == 1


def test_compile_rejects_invalid():
    with pytest.raises(CircuitValidationError):
        compile_circuit(Circuit(2, (gate("cz", 0, 3),)))


CORPUS = random_corpus(2024, 100, 5, 25)


@pytest.mark.parametrize("c", CORPUS[:50])
def test_wiremap_invariants(c):
    cr = compile_circuit(c)
    w = cr.wires
    assert len(set(w.current)) == len(w.current)
    assert not set(w.retired) & set(w.current)
    ancillas = {a(k) for k in range(w.next_ancilla)}
    assert ancillas <= set(w.retired) | set(w.current)
    assert cr.poly.m == cr.m == w.next_ancilla


@pytest.mark.parametrize("c", CORPUS)
def test_ancilla_formula_and_coefficient_discipline(c):
    cr = compile_circuit(c)
    assert cr.m == expected_ancillas(c)
    for mono, coeff in cr.poly.terms.items():
        if len(mono) == 1:
            assert coeff in range(1, 8)
        else:
            # repeated emissions of 4 on one monomial can only cancel, never change
            assert coeff == 4
    # only Y touches the constant
    assert cr.poly.constant == 6 * expand_macros(c).count(GateKind.Y) % 8


def test_linear_emissions_come_from_rule_table():
    for c in CORPUS:
        for step in compile_circuit(c).trace:
            for mono, coeff in step.terms:
                assert coeff in ({1, 2, 4, 6, 7} if len(mono) == 1 else {4})


def test_deterministic():
    for c in CORPUS[:20]:
        one, two = compile_circuit(c), compile_circuit(c)
        assert one.poly == two.poly and one.wires == two.wires


@pytest.mark.parametrize("c", CORPUS[:20])
def test_hadamard_pairs_leave_amplitudes(c):
    padded = c.append(*(g for q in range(c.qubit_count) for g in (gate("h", q), gate("h", q))))
    base, extra = compile_circuit(c), compile_circuit(padded)
    assert extra.m == base.m + 2 * c.qubit_count
    diff = np.abs(amplitude_matrix(base, cap=40) - amplitude_matrix(extra, cap=40)).max()
    assert diff <= 1e-9
