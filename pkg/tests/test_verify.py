import pytest

from gasketnet.verify import SUITES, Check, run_suite


@pytest.mark.parametrize("suite", SUITES)
def test_suite_passes(suite):
    checks = run_suite(suite, 6)
    assert checks
    failed = [c.line() for c in checks if not c.passed]
    assert not failed


def test_check_line_format():
    assert Check("x", True, 3, "ignored").line() == "PASS  x  (3 cases)"
    assert Check("x", False, 3, "12 21").line() == "FAIL  x  (3 cases)  first counterexample: 12 21"


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope", 3)
