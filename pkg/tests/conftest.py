import numpy as np
import pytest

from weaveframes import GFrameFamily, build_controlled_instance, build_weaving_instance, paper_example

ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def example12():
    return paper_example(12)


@pytest.fixture
def swap_pair():
    e = np.eye(2)
    lam = GFrameFamily((e[:1], e[1:]))
    om = GFrameFamily((e[1:], e[:1]))
    return build_weaving_instance(lam, om, e, e, e)


@pytest.fixture
def identity_instance():
    e = np.eye(3)
    return build_controlled_instance(GFrameFamily((e,)), e, e, e)


@pytest.fixture(scope="session")
def record_criterion():
    def record(name, ok, detail=""):
        ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
