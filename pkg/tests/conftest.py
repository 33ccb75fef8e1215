import math

import pytest

from atomarch.units import parse_quantity

# CODATA 2018 values, typed in independently of scipy
E_CHARGE = 1.602176634e-19
EPS0 = 8.8541878128e-12
PLANCK = 6.62607015e-34
HBAR = PLANCK / (2 * math.pi)
BOHR = 5.29177210903e-11
KB = 1.380649e-23
AMU = 1.66053906660e-27


def q(text):
    return parse_quantity(text)


@pytest.fixture
def cs_spec():
    from atomarch.transport import TransportSpec

    return TransportSpec("Cs", q("2pi x 100 kHz"), 0.1)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
