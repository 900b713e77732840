from __future__ import annotations

from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

_acceptance_lines: list[str] = []


def load_reference_table() -> dict[str, list[str]]:
    table = {}
    for line in (DATA / "table1_reference.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        label, body = line.split(":", 1)
        table[label.strip()] = body.split()
    return table


@pytest.fixture
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
