import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("gstruct", max_examples=40, deadline=None)
settings.load_profile("gstruct")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, format_line

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(format_line(number))
