import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

SUITE = [
    "repetition:3", "repetition:5", "repetition:7", "repetition:9",
    "surface:3", "surface:5", "surface:7", "color:3", "color:5",
]

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
