import numpy as np
import pytest

from rabi_riccati import rabi, riccati
from rabi_riccati.fock import FockDim

BENCHMARK = dict(omega=1.0, beta=0.2, delta=0.1, g=0.1)


def benchmark_params(n_levels=60, buffer=None):
    return rabi.ModelParams(dim=FockDim(n_levels, buffer), **BENCHMARK)


@pytest.fixture(scope="session")
def bench():
    return benchmark_params()


@pytest.fixture(scope="session")
def bench_solution(bench):
    return riccati.solve_fixed_point(bench, riccati.SolverConfig(tol=1e-12))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_matrix(rng, n, scale=1.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict(capsys):
    """Record one PASS/FAIL line, echo it live, then assert it."""

    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
