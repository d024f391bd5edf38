"""Acceptance criteria 1-12, one test each.

Each test prints a single PASS/FAIL line (visible with ``pytest -s``); the
same lines are repeated in the terminal summary at the end of the run.
"""
import pytest

from disc_sos.acceptance import CRITERIA, run_one

RESULTS = []


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{c.number:02d}" for c in CRITERIA])
def test_criterion(crit):
    res = run_one(crit, "fast")
    RESULTS.append(res)
    print(res.line())
    assert res.ok, res.detail
