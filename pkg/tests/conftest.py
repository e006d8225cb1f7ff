import numpy as np
import pytest

from cortexwaves.retina import CATALOG, generate_synthetic
from cortexwaves.v1 import gabor_bank, integrate


@pytest.fixture(scope="session")
def bank():
    return gabor_bank()


@pytest.fixture(scope="session")
def catalog_ioms(bank):
    return [integrate(generate_synthetic(spec, seed=k), bank) for k, spec in enumerate(CATALOG)]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
