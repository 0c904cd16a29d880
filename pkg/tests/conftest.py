from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from linecover import gadget
from linecover.geometry import Point

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def pts(*coords):
    return [Point(Fraction(x), Fraction(y)) for x, y in coords]


@pytest.fixture(scope="session")
def small_gadget():
    """The small three-clause gadget (11 points) and its layout."""
    return gadget.build_gadget(gadget.THREE_CLAUSE_INSTANCE, 0)


@pytest.fixture
def square():
    return pts((0, 0), (1, 0), (1, 1), (0, 1))


# acceptance results, printed as one line per criterion at the end of the run
ACCEPTANCE: dict[int, str] = {}


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
