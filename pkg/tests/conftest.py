import numpy as np
import pytest

from wpbn.config import NetworkConfig

_ACCEPTANCE_LINES = []


@pytest.fixture
def default_cfg():
    # lambda_p = 0.1, lambda_b = 0.01, 40 dBm, beta 0.5, d00 1, N0 1e-4, alpha 4, Np 1
    return NetworkConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
