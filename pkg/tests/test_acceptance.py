"""Acceptance gate: every criterion at its pinned tolerance.

Each test prints the one-line pass/fail record of its criterion, so a
verbose run doubles as the acceptance report.
"""
import pytest

from keldrot.acceptance import CRITERIA


@pytest.mark.parametrize("name", sorted(CRITERIA), ids=sorted(CRITERIA))
def test_criterion(name, capsys):
    result = CRITERIA[name]()
    with capsys.disabled():
        print(f"\n{result.line()}")
    assert result.passed, (
        f"{name}: measured {result.measured:.3e} exceeds tolerance "
        f"{result.tolerance:.1e}; details: {result.details}"
    )
