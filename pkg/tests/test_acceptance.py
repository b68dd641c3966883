"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (visible with ``-s`` or in
the captured output of a failure) followed by the computed-vs-expected
details recorded by the check.
"""
import pytest

from kippen import acceptance

# read by the terminal-summary hook in conftest.py
RESULTS = []


def test_registry_has_all_twelve_criteria():
    assert len(acceptance.CHECKS) == 12


@pytest.mark.parametrize("check_id", list(acceptance.CHECKS))
def test_criterion(check_id):
    result = acceptance.CHECKS[check_id]()
    RESULTS.append(result)
    print(f"{'PASS' if result.passed else 'FAIL'} {result.id}: {result.title}")
    for line in result.details:
        print(f"    {line}")
    failed = [d for d in result.details if d.startswith("FAIL")]
    assert result.passed, "\n".join(failed)
