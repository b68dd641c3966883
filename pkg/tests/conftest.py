import numpy as np
import pytest


def random_complex(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_hermitian(rng, n):
    G = random_complex(rng, n)
    return (G + G.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def jordan2():
    return np.array([[0, 1], [0, 0]], dtype=np.complex128)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran."""
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for r in results:
        terminalreporter.write_line(f"{'PASS' if r.passed else 'FAIL'} {r.id}: {r.title}")
    passed = sum(r.passed for r in results)
    terminalreporter.write_line(f"{passed}/{len(results)} criteria passed")
