import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from typeflow.frontend import parse_program  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


def load(name: str):
    return parse_program((CORPUS / name).read_text())


@pytest.fixture
def example():
    return load("running_example.tfl")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
