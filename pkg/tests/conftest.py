import pytest
from hypothesis import settings

from shearwave import PhysicalConstants, VorticityProfile

settings.register_profile("default", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("default")

# lines collected by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def irrotational():
    return VorticityProfile.constant(-1.0)


@pytest.fixture(scope="session")
def two_layer():
    return VorticityProfile((-2.0, -1.0, 0.0), (1.0, -2.0))


@pytest.fixture(scope="session")
def three_layer():
    return VorticityProfile((-1.5, -1.0, -0.4, 0.0), (2.0, -1.0, 1.0))


@pytest.fixture(scope="session")
def water():
    return PhysicalConstants(9.81, 0.07)
