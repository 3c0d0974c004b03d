import time

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def zeros_k4_large():
    """Zeros of the primitive character mod 4 on [500, 2e4] (about 26500), with build time."""
    from dirichlet_r2.characters import get_character
    from dirichlet_r2.zeros import find_zeros

    start = time.perf_counter()
    zl = find_zeros(get_character(4), 500.0, 2.0e4)
    return zl, time.perf_counter() - start


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
