import numpy as np
import pytest

from varmult.grid import GridFunction, frequencies


@pytest.fixture
def rng(request):
    # one stream per test, stable across runs
    return np.random.default_rng([7, sum(map(ord, request.node.name))])


def random_signal(rng, n):
    return GridFunction(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def naive_dft(v):
    n = len(v)
    k = frequencies(n)
    x = np.arange(n)
    return np.array([sum(v[j] * np.exp(-2j * np.pi * kk * j / n) for j in x) for kk in k])


def naive_idft(c):
    n = len(c)
    k = frequencies(n)
    return np.array([sum(c[i] * np.exp(2j * np.pi * kk * x / n) for i, kk in enumerate(k)) / n
                     for x in range(n)])


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
