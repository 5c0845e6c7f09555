"""The eleven acceptance criteria at their stated tolerances.

Each criterion is one test; a summary with one pass/fail line per criterion
is printed at the end of the run.
"""

import pytest

from rtlab.suite import CRITERIA, run_criterion

ACCEPTANCE_LINES: list[str] = []
_CTX: dict = {}


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(number):
    res = run_criterion(number, _CTX)
    ACCEPTANCE_LINES.append(res.line())
    assert res.status == "pass", res.details
