import pytest

from bhtrimer import ModelParams, solve
from bhtrimer.dynrep import classify_and_fit

# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def eig30():
    return solve(ModelParams())


@pytest.fixture(scope="session")
def classified30(eig30):
    return classify_and_fit(eig30)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
