import sys

import pytest

from kmspec import OrthoPolySystem, chebyshev_chain, pentadiagonal_chebyshev
from kmspec.chainspec import random_conductance_chain


@pytest.fixture(scope="session")
def cheb():
    return chebyshev_chain()


@pytest.fixture(scope="session")
def penta():
    return pentadiagonal_chebyshev()


@pytest.fixture(scope="session")
def cheb_sys(cheb):
    return OrthoPolySystem.from_chain(cheb)


@pytest.fixture(scope="session")
def random_chains():
    return [random_conductance_chain(m, s) for m, s in ((1, 101), (2, 102), (3, 103), (2, 104), (3, 105))]


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    lines = getattr(mod, "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
