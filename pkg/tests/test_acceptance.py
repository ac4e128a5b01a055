"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import time

import pytest

from msokit import selftest

RESULTS = {}


def _report(capsys, number, name, limit, fn):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    passed = ok and elapsed < limit
    r = selftest.Result(number, name, passed, detail, elapsed, limit)
    RESULTS[number] = r
    with capsys.disabled():
        print("\n" + r.line())
    return r


@pytest.mark.parametrize("number,name,limit,fn", selftest.CHECKS, ids=[c[1] for c in selftest.CHECKS])
def test_criterion(capsys, number, name, limit, fn):
    r = _report(capsys, number, name, limit, fn)
    assert r.passed, r.detail


def test_criterion_10_full_selftest(capsys):
    lines = []
    start = time.perf_counter()
    results = selftest.run(out=lines.append)
    elapsed = time.perf_counter() - start
    final = results[-1]
    assert final.number == 10
    with capsys.disabled():
        print("\n" + final.line())
    assert elapsed < selftest.TOTAL_LIMIT
    assert final.passed
    # same verdicts and details as the individual runs above: deterministic
    for r in results[:-1]:
        if r.number in RESULTS:
            assert (r.passed, r.detail) == (RESULTS[r.number].passed, RESULTS[r.number].detail)
    assert len(lines) == 10
