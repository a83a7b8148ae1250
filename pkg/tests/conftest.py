import pytest

from ordlogic.casebook import FIXTURES, load_formula, load_structure


@pytest.fixture
def fx():
    """Load a bundled structure (.txt) or formula (.fo) by relative path."""
    def load(rel):
        return load_formula(FIXTURES, rel) if rel.endswith(".fo") else load_structure(FIXTURES, rel)
    return load


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def acceptance_lines():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
