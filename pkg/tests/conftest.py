import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CRITERIA = pytest.StashKey[dict]()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion(request):
    """Record the verdict of one acceptance criterion for the end-of-run summary."""
    store = request.config.stash.setdefault(CRITERIA, {})
    # test names look like test_criterion_05_*; an exception leaves this verdict in place
    store[int(request.node.name.split("_")[2])] = (False, "raised before reporting")

    def record(number: int, passed: bool, detail: str):
        store[number] = (bool(passed), detail)
        print(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    store = config.stash.get(CRITERIA, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 13):
        if number not in store:
            terminalreporter.write_line(f"criterion {number:2d} NOT RUN")
            continue
        passed, detail = store[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {detail}")
