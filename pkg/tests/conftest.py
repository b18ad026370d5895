import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def tie_free(rng, m, d, scale=1.0):
    """Continuous data; redrawn until no column has ties."""
    while True:
        x = rng.normal(size=(m, d)) * scale
        if all(np.unique(x[:, j]).size == m for j in range(d)):
            return x


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
