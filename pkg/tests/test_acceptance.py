"""Acceptance gate: one test per criterion, each printing a pass/fail
line and enforcing its runtime budget.  Run with -s to see the lines."""

import pytest

from twistconj.experiments import ALL_CRITERIA


@pytest.mark.parametrize("name,fn,budget", ALL_CRITERIA,
                         ids=[c[0].replace(" ", "-") for c in ALL_CRITERIA])
def test_criterion(name, fn, budget):
    res = fn(seed=0)
    print(res.line())
    assert res.passed, f"{name}: {res.detail}"
    assert res.elapsed < budget, \
        f"{name}: {res.elapsed:.1f}s exceeded the {budget:.0f}s budget"
