import pytest

from qcf.presets import preset


@pytest.fixture(scope="session")
def example_models():
    return {name: preset(name) for name in ("example1", "example2", "example3", "example4")}


def pytest_terminal_summary(terminalreporter):
    from oracles import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
