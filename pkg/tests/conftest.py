import pytest

from hurwitz import acceptance as A
from hurwitz.equipped import equipment_from_reps
from hurwitz.perm import closure, parse_perm, symmetric_group


def P(text, d=3):
    return parse_perm(text, d)


@pytest.fixture(scope="session")
def s3t():
    return A.s3_transpositions()


@pytest.fixture(scope="session")
def s3m():
    return A.s3_mixed()


@pytest.fixture(scope="session")
def s4t():
    return A.s4_transpositions()


@pytest.fixture(scope="session")
def s4m():
    return A.s4_mixed()


@pytest.fixture(scope="session")
def z3():
    return A.cyclic3()


@pytest.fixture(scope="session")
def v4():
    return A.klein_four()


@pytest.fixture(scope="session")
def a4():
    G = closure([parse_perm("(1 2 3)", 4), parse_perm("(2 3 4)", 4)])
    return equipment_from_reps(G, ["(1 2 3)"])


@pytest.fixture(scope="session")
def S3():
    return symmetric_group(3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
