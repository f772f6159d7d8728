import numpy as np
import pytest

from multischmidt.states import half_variant, phi_star, psi_star


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def psi():
    return psi_star()


@pytest.fixture(scope="session")
def phi():
    return phi_star()


@pytest.fixture(scope="session")
def half():
    return half_variant()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
