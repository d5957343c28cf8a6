"""Acceptance suite: one test per criterion, one printed line per check.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS/FAIL lines.
"""
import pytest

from apsq import verify


@pytest.mark.parametrize("n", sorted(verify.CRITERIA), ids=lambda n: f"criterion_{n}")
def test_criterion(n, capsys):
    rows = verify.run_criterion(n)
    assert rows, "criterion produced no checks"
    with capsys.disabled():
        print()
        print(f"criterion {n}")
        print(verify.format_table(rows))
    failed = [r for r in rows if not r.passed]
    assert not failed, "\n".join(f"{r.name}: {r.detail}" for r in failed)
