"""One check per headline claim; each prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the table.
"""

import time

import pytest

from cimpoly.reproduce import CHECKS, Context

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def ctx():
    return Context()


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number, ctx, capsys):
    t = time.perf_counter()
    res = CHECKS[number](ctx)
    res.seconds = time.perf_counter() - t
    with capsys.disabled():
        print(f"\n{res.line()} {res.detail if not res.passed else ''}".rstrip())
    assert res.passed, res.detail
