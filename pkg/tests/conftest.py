import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from taunets.asymptotics import EpsGrid

settings.register_profile(
    "taunets",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("taunets")


@pytest.fixture(scope="session")
def grid():
    return EpsGrid.default()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance summary: one PASS/FAIL line per criterion, printed at the end of the run

ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def record(number: int, ok: bool, text: str) -> None:
        lines[number] = f"{'PASS' if ok else 'FAIL'} criterion {number}: {text}"
        print(lines[number])

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
