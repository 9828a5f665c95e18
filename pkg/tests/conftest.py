import numpy as np
import pytest

from geopierce.kernel import validate_polygon

# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def square():
    return validate_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def lshape():
    # reflex corner at (1, 1)
    return validate_polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


@pytest.fixture
def ushape():
    # notch between x = 1 and x = 2 from the top down to y = 1
    return validate_polygon([(0, 0), (3, 0), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)])


@pytest.fixture
def comb():
    # 12 vertices, three teeth pointing up
    return validate_polygon([
        (0, 0), (5, 0), (5, 3), (4, 3), (4, 1), (3, 1),
        (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3),
    ])


@pytest.fixture
def big_square():
    return validate_polygon([(-1000, -1000), (1000, -1000), (1000, 1000), (-1000, 1000)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
