import random
from fractions import Fraction

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return random.Random(0)


def random_rationals(count: int, max_den: int, seed: int = 0) -> list[Fraction]:
    r = random.Random(seed)
    out = []
    for _ in range(count):
        q = r.randint(2, max_den)
        out.append(Fraction(r.randrange(q), q))
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
