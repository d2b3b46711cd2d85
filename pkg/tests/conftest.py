import numpy as np
import pytest

from phasepoly.circuit import parse_circuit

SAMPLE_TEXT = "qubits 3\nz 0\ns 1\nh 1\ncz 0 1\nt 2\nh 2\n"


@pytest.fixture
def sample():
    return parse_circuit(SAMPLE_TEXT)


def basis_bits(k, n):
    return [(k >> q) & 1 for q in range(n)]


def brute_gwht(exponents):
    """Literal sum_x zeta^f(x) (-1)^(u.x) with cmath, independent of the package."""
    import cmath

    size = len(exponents)
    out = []
    for u in range(size):
        total = 0
        for xv in range(size):
            sign = -1 if bin(u & xv).count("1") % 2 else 1
            total += cmath.exp(2j * cmath.pi * exponents[xv] / 8) * sign
        out.append(total)
    return np.array(out)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
